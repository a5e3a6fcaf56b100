#include <doctest.h>

#include <cmath>

#include "secmeas/error.hpp"
#include "secmeas/orthosys.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace secmeas;

namespace {

std::vector<oracle::Real> oracle_moments(const std::string& name, int count) {
  if (name == "lebesgue01") return oracle::lebesgue_moments(count);
  if (name == "gaussian") return oracle::gaussian_moments(count);
  if (name == "exponential") return oracle::exponential_moments(count);
  return oracle::chebyshev2_moments(count);
}

}  // namespace

TEST_CASE("generate examples") {
  const auto leb = generate(get_family("lebesgue01"), 6);
  CHECK(leb.size() == 6);
  CHECK(leb.Q[0].is_zero());
  CHECK(leb.Q[1].degree() == 0);
  CHECK(leb.Q[1][0] == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(leb.P[1](0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

  const auto cheb = generate(get_family("chebyshev2"), 6);
  CHECK(cheb.P[2](1.0) == doctest::Approx(3.0).epsilon(1e-14));
  for (int n = 0; n <= 6; ++n) CHECK(cheb.a[static_cast<std::size_t>(n)] == doctest::Approx(std::pow(2.0, n)));

  const auto g = generate(get_family("gaussian"), 4);
  const Polynomial want{-1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0)};
  CHECK(coefficient_distance(g.P[2], want) < 1e-15);

  CHECK_THROWS_AS(generate(get_family("gaussian"), 40), Error);
}

TEST_CASE("property: P_n matches Gram-Schmidt on exact moments") {
  for (const std::string name : {"lebesgue01", "gaussian", "exponential", "chebyshev2"}) {
    const int N = 7;
    const auto basis = oracle::gram_schmidt(oracle_moments(name, 2 * N + 1), N);
    const auto sys = generate(get_family(name), N);
    for (int n = 0; n <= N; ++n) {
      const auto& ref = basis[static_cast<std::size_t>(n)];
      std::vector<double> c(ref.begin(), ref.end());
      CAPTURE(name);
      CAPTURE(n);
      CHECK(coefficient_distance(sys.P[static_cast<std::size_t>(n)], Polynomial(c)) < 1e-10);
      CHECK(sys.a[static_cast<std::size_t>(n)] == doctest::Approx(static_cast<double>(ref.back())).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: Q_n is the secondary polynomial of P_n") {
  const auto fam = get_family("lebesgue01");
  const auto sys = generate(fam, 6);
  gen::Source src(7);
  for (int n = 1; n <= 6; ++n) {
    const auto& p = sys.P[static_cast<std::size_t>(n)];
    for (int i = 0; i < 5; ++i) {
      const double x = src.uniform(-0.5, 1.5);
      const oracle::Real px = p(x);
      // The quotient is a polynomial in t, so the midpoint rule needs no special care at t = x.
      const double q = static_cast<double>(oracle::midpoint_refined(
          [&](oracle::Real t) { return (p(static_cast<double>(t)) - px) / (t - x); }, 0, 1, 1 << 12));
      CAPTURE(n);
      CAPTURE(x);
      CHECK(sys.Q[static_cast<std::size_t>(n)](x) == doctest::Approx(q).epsilon(1e-9));
    }
  }
  for (const auto& name : builtin_family_names()) {
    const auto s = generate(get_family(name), 6);
    for (int n = 0; n <= 6; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(coefficient_distance(apply_T_poly(s, s.P[static_cast<std::size_t>(n)]), s.Q[static_cast<std::size_t>(n)]) <
            1e-12);
    }
  }
}

TEST_CASE("apply_T") {
  const double m[] = {1.0, 0.5, 1.0 / 3};
  // f = x^2: (t^2 - x^2)/(t - x) = t + x, integrated: m1 + x m0.
  const auto q = apply_T(Polynomial{0, 0, 1}, m);
  CHECK(q == Polynomial{0.5, 1.0});
  CHECK(apply_T(Polynomial{4.0}, m).is_zero());
  CHECK(apply_T(Polynomial{}, m).is_zero());
  CHECK_THROWS_AS(apply_T(Polynomial{0, 0, 0, 0, 1}, m), Error);
}

TEST_CASE("property: orthonormality under quadrature") {
  for (const auto& name : builtin_family_names()) {
    const auto sys = generate(get_family(name), 6);
    for (int n = 0; n <= 6; ++n)
      for (int m = 0; m <= n; ++m) {
        CAPTURE(name);
        CAPTURE(n);
        CAPTURE(m);
        CHECK(orthonormality_check(sys, n, m) == doctest::Approx(n == m ? 1.0 : 0.0).scale(1.0).epsilon(1e-8));
      }
  }
}

TEST_CASE("property: leading coefficients are inverse products of t_k") {
  for (const auto& name : builtin_family_names()) {
    const auto fam = get_family(name);
    const auto sys = generate(fam, 12);
    double prod = 1.0;
    for (int n = 0; n <= 12; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(sys.a[static_cast<std::size_t>(n)] == doctest::Approx(1.0 / prod).epsilon(1e-13));
      CHECK(sys.P[static_cast<std::size_t>(n)].leading() == doctest::Approx(sys.a[static_cast<std::size_t>(n)]).epsilon(1e-13));
      prod *= fam.recurrence(n).t;
    }
  }
}

TEST_CASE("property: the Wronskian is the constant 1/t_n") {
  for (const auto& name : builtin_family_names()) {
    const auto fam = get_family(name);
    for (int n = 0; n <= 10; ++n) {
      const auto w = wronskian_extended(fam, n);
      const double want = 1.0 / fam.recurrence(n).t;
      CAPTURE(name);
      CAPTURE(n);
      CHECK(w[0] == doctest::Approx(want).epsilon(1e-12));
      double max_rest = 0;
      for (int k = 1; k <= w.degree(); ++k) max_rest = std::max(max_rest, std::abs(w[k]));
      CHECK(max_rest <= 1e-12 * want);
    }
    const auto sys = generate(fam, 5);
    for (int n = 0; n < 4; ++n) {
      const auto w = wronskian(sys, n);
      CHECK(coefficient_distance(w, Polynomial{1.0 / fam.recurrence(n).t}) < 1e-9);
    }
  }
}

TEST_CASE("chebyshev2 Turan identity") {
  const auto sys = generate(get_family("chebyshev2"), 12);
  gen::Source src(11);
  for (int n = 1; n < 12; ++n) {
    const double x = src.uniform(-1, 1);
    const auto i = static_cast<std::size_t>(n);
    CHECK(sys.P[i](x) * sys.P[i](x) - sys.P[i - 1](x) * sys.P[i + 1](x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("generate over an explicit table") {
  const auto fam = get_family("gaussian");
  const auto table = fam.recurrence_table(4, 2);
  const auto sys = generate(fam, table, 4);
  // Shifted Hermite: P_1 = x / t_2 = x / sqrt(3).
  CHECK(sys.P[1][1] == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK_THROWS_AS(generate(fam, std::span(table).first(2), 4), Error);
}
