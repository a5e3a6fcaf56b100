#include <benchmark/benchmark.h>

#include <cmath>

#include "secmeas/fourier.hpp"
#include "secmeas/quad.hpp"
#include "secmeas/secondary_chain.hpp"

using namespace secmeas;

static void BM_GaussRule(benchmark::State& state) {
  const auto rec = get_family("lebesgue01").recurrence_table(32);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_rule(rec, m));
}
BENCHMARK(BM_GaussRule)->Arg(8)->Arg(16)->Arg(32);

static void BM_IntegrateCompact(benchmark::State& state) {
  const auto s = Interval::compact(0, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate([](double x) { return std::log(x) * std::log(x); }, s, 1e-10));
}
BENCHMARK(BM_IntegrateCompact);

static void BM_IntegrateRealLine(benchmark::State& state) {
  const auto s = Interval::real_line();
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate([](double x) { return std::exp(-x * x / 2); }, s, 1e-10));
}
BENCHMARK(BM_IntegrateRealLine);

static void BM_LevelDensity(benchmark::State& state) {
  const SecondaryChain chain(get_family(state.range(1) ? "gaussian" : "lebesgue01"));
  const int n = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.density(n, x));
    x = x < 0.9 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_LevelDensity)->Args({1, 0})->Args({8, 0})->Args({1, 1})->Args({8, 1});

static void BM_MultiintN3(benchmark::State& state) {
  const SecondaryChain chain(get_family("lebesgue01"));
  const Polynomial f{0.3, -1.0, 0.5, 2.0, 0.0, 1.0, -0.7};
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(fourier_multiint(chain, [&](double x) { return f(x); }, 3, m));
}
BENCHMARK(BM_MultiintN3)->Arg(4)->Arg(8);

static void BM_MultiintThreads(benchmark::State& state) {
  const SecondaryChain chain(get_family("lebesgue01"));
  TensorOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(fourier_multiint(chain, [](double x) { return 1 / (x + 1); }, 3, 10, opt));
}
BENCHMARK(BM_MultiintThreads)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK_MAIN();
