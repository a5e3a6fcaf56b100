#include <doctest.h>

#include <cmath>

#include "secmeas/error.hpp"
#include "secmeas/fourier.hpp"
#include "support/generators.hpp"

using namespace secmeas;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

// Shift a with -a off the support, or nothing on the real line.
std::optional<double> admissible_shift(const MeasureFamily& fam) {
  switch (fam.support().kind) {
    case SupportKind::RealLine: return std::nullopt;
    case SupportKind::HalfLine: return 1.0 - fam.support().lower;
    case SupportKind::Compact: return fam.support().lower < 0 ? 2.0 : 1.0;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("fourier_direct examples") {
  for (const auto& name : builtin_family_names()) {
    const auto sys = generate(get_family(name), 6);
    CAPTURE(name);
    CHECK(fourier_direct(sys, [](double) { return 1.0; }, 0) == doctest::Approx(1.0).epsilon(1e-10));
    for (int n = 1; n <= 6; ++n) CHECK(std::abs(fourier_direct(sys, [](double) { return 1.0; }, n)) < 1e-8);
  }
  const auto leb = generate(get_family("lebesgue01"), 4);
  CHECK(fourier_direct(leb, [](double x) { return x; }, 1) == doctest::Approx(1 / (2 * std::sqrt(3.0))).epsilon(1e-10));
  CHECK(kind_of([&] { fourier_direct(leb, [](double x) { return x; }, 5); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("fourier_multiint examples") {
  const SecondaryChain chain(get_family("lebesgue01"));
  for (int n = 0; n <= 3; ++n) {
    const auto& pn = chain.base().P[static_cast<std::size_t>(n)];
    CHECK(fourier_multiint(chain, pn, n, 4) == doctest::Approx(1.0).epsilon(1e-8));
    // The generic table kernel on the same polynomial.
    CHECK(fourier_multiint(chain, [&](double x) { return pn(x); }, n, 4) == doctest::Approx(1.0).epsilon(1e-8));
  }
  const Polynomial cubic{1, 0, 0, 1};
  const double direct = fourier_direct(chain.base(), [&](double x) { return cubic(x); }, 2);
  CHECK(fourier_multiint(chain, cubic, 2, 6) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(std::abs(fourier_multiint(chain, Polynomial{3.0, -1.0}, 2, 4)) < 1e-9);
  CHECK(std::abs(fourier_multiint(chain, Polynomial{0.2, 0.1, 5.0}, 3, 4)) < 1e-9);

  CHECK(kind_of([&] { fourier_multiint(chain, cubic, 4, 4); }) == ErrorKind::GridTooLarge);
  CHECK(kind_of([&] { fourier_multiint(chain, cubic, 1, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("property: the multiple integral equals direct quadrature for random polynomials") {
  gen::Source src(31337);
  for (const std::string name : {"lebesgue01", "chebyshev2"}) {
    const SecondaryChain chain(get_family(name));
    for (int i = 0; i < 20; ++i) {
      const auto f = src.polynomial(6);
      for (int n = 0; n <= 3; ++n) {
        const double direct = fourier_direct(chain.base(), [&](double x) { return f(x); }, n);
        CAPTURE(name);
        CAPTURE(i);
        CAPTURE(n);
        CHECK(std::abs(fourier_multiint(chain, f, n, 4) - direct) < 1e-7);
      }
    }
  }
}

TEST_CASE("property: variance products and composed operators") {
  for (const auto& name : builtin_family_names()) {
    const SecondaryChain chain(get_family(name));
    double prod = 1.0;
    for (int n = 0; n <= 8; ++n) {
      const double an = chain.base().a[static_cast<std::size_t>(n)];
      CAPTURE(name);
      CAPTURE(n);
      CHECK(prod == doctest::Approx(1.0 / (an * an)).epsilon(1e-10));
      prod *= chain.level_variance(n);
      if (n >= 1) {
        const auto fp = composed_operator(chain, chain.base().P[static_cast<std::size_t>(n)], n);
        CHECK(fp.degree() == 0);
        CHECK(fp[0] == doctest::Approx(an).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("isometry examples") {
  const SecondaryChain chain(get_family("lebesgue01"));
  const auto ones = isometry_check(chain, Polynomial{1.0}, Polynomial{1.0}, 0);
  CHECK(std::abs(ones.lhs) < 1e-12);
  CHECK(ones.rhs == 0.0);
  const auto xx = isometry_check(chain, Polynomial{0, 1}, Polynomial{0, 1}, 0);
  CHECK(xx.lhs == doctest::Approx(1.0 / 12).epsilon(1e-10));
  CHECK(xx.rhs == doctest::Approx(1.0 / 12).epsilon(1e-10));
  const auto xq = isometry_check(chain, Polynomial{0, 1}, Polynomial{0, 0, 1}, 0);
  CHECK(std::abs(xq.lhs - xq.rhs) < 1e-7);
  CHECK(xq.lhs == doctest::Approx(1.0 / 12).epsilon(1e-10));
}

TEST_CASE("property: isometry and chain reduction on compact families") {
  gen::Source src(99);
  for (const std::string name : {"lebesgue01", "chebyshev2", "chebyshev2_01"}) {
    const SecondaryChain chain(get_family(name));
    for (int i = 0; i < 4; ++i) {
      const auto f = src.polynomial(5);
      const auto g = src.polynomial(5);
      for (int n = 0; n <= 3; ++n) {
        const auto r = isometry_check(chain, f, g, n);
        CAPTURE(name);
        CAPTURE(n);
        CHECK(std::abs(r.lhs - r.rhs) < 1e-7);
      }
      for (int m = 1; m <= 3; ++m) {
        const auto r = chain_reduction_check(chain, f, m);
        CAPTURE(name);
        CAPTURE(m);
        CHECK(std::abs(r.lhs - r.rhs) < 1e-7);
      }
    }
  }
}

TEST_CASE("eigen_product examples") {
  const SecondaryChain leb(get_family("lebesgue01"));
  CHECK(eigen_product(leb, 1.0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(kind_of([&] { eigen_product(leb, -0.5, 1); }) == ErrorKind::OnSupport);
  CHECK(kind_of([&] { eigen_product(leb, 0.0, 1); }) == ErrorKind::OnSupport);

  // Constant chain: every level transform at -1 is -12 + 8 sqrt 2 and
  // a_n / a_{n-1} = 4.
  const SecondaryChain c01(get_family("chebyshev2_01"));
  const auto f = [](double x) { return 1 / (x + 1); };
  double prev = fourier_direct(c01.base(), f, 0);
  for (int n = 1; n <= 5; ++n) {
    const double cn = fourier_direct(c01.base(), f, n);
    CHECK(4 * cn / prev == doctest::Approx(-12 + 8 * std::sqrt(2.0)).epsilon(1e-8));
    prev = cn;
  }
}

TEST_CASE("property: the product formula matches direct quadrature") {
  for (const auto& name : builtin_family_names()) {
    const auto fam = get_family(name);
    const auto a = admissible_shift(fam);
    if (!a) continue;
    const SecondaryChain chain(fam);
    for (int n = 0; n <= 4; ++n) {
      const double direct = fourier_direct(chain.base(), [&](double x) { return 1 / (x + *a); }, n);
      CAPTURE(name);
      CAPTURE(n);
      CHECK(std::abs(eigen_product(chain, *a, n) - direct) < 1e-7);
    }
  }
}

TEST_CASE("property: 1/(x+a) is an eigenfunction of the secondary-polynomial operator") {
  for (const auto& name : builtin_family_names()) {
    const auto fam = get_family(name);
    const auto a = admissible_shift(fam);
    if (!a) continue;
    const double lambda = fam.stieltjes(-*a).real();
    const auto f = [&](double x) { return 1 / (x + *a); };
    const auto& s = fam.support();
    for (int i = 1; i <= 10; ++i) {
      const double x = s.bounded() ? s.lower + (s.upper - s.lower) * i / 11.0 : s.lower + 0.6 * i;
      CAPTURE(name);
      CAPTURE(x);
      CHECK(std::abs(apply_T_quadrature(fam, f, x) - lambda * f(x)) < 1e-7);
    }
  }
  CHECK(kind_of([] { apply_T_quadrature(get_family("lebesgue01"), [](double x) { return x; }, 1.0); }) ==
        ErrorKind::OutOfDomain);
}

TEST_CASE("generating function examples") {
  const auto g = generating_function_check(0.3, 0.5, 30);
  CHECK(g.closed_form == doctest::Approx(0.3 / 1.09).epsilon(1e-14));
  CHECK(std::abs(g.partial_sum - g.closed_form) < 1e-12);
  const auto zero = generating_function_check(0.0, 0.4, 30);
  CHECK(zero.partial_sum == 0.0);
  CHECK(zero.closed_form == 0.0);
  const double t = 0.3;
  const auto edge = generating_function_check(t, 1e-9, 40);
  CHECK(edge.closed_form == doctest::Approx(t / ((t + 1) * (t + 1))).epsilon(1e-8));
  CHECK(std::abs(edge.partial_sum - edge.closed_form) < 1e-12);
  CHECK(kind_of([] { generating_function_check(1.0, 0.5, 10); }) == ErrorKind::OutOfDomain);
  CHECK(kind_of([] { generating_function_check(0.2, 1.0, 10); }) == ErrorKind::OutOfDomain);
  CHECK(kind_of([] { generating_function_check(0.2, 0.5, 41); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("property: generating function tail bound") {
  gen::Source src(5);
  for (int i = 0; i < 50; ++i) {
    const double t = src.uniform(-0.6, 0.6);
    const double x = src.uniform(0.01, 0.99);
    const int N = src.integer(5, 40);
    const auto g = generating_function_check(t, x, N);
    const double bound = 10 * std::pow(std::abs(t), N + 2) / (1 - std::abs(t));
    CAPTURE(t);
    CAPTURE(x);
    CAPTURE(N);
    CHECK(std::abs(g.partial_sum - g.closed_form) <= bound + 1e-15);
  }
}

TEST_CASE("fourier_report") {
  const SecondaryChain chain(get_family("lebesgue01"));
  const auto poly = FourierTarget::polynomial(Polynomial{1, 0, 0, 1});
  const auto r = fourier_report(chain, poly, 2, 6);
  REQUIRE(r.multiint);
  CHECK(!r.product_form);
  CHECK(!r.refinement_delta);
  CHECK(*r.discrepancy == doctest::Approx(std::abs(r.direct - *r.multiint)));
  CHECK(*r.discrepancy < 1e-8);

  const auto rat = FourierTarget::rational(1.0);
  const auto r1 = fourier_report(chain, rat, 1, 6);
  REQUIRE(r1.multiint);
  REQUIRE(r1.product_form);
  REQUIRE(r1.refinement_delta);
  CHECK(*r1.refinement_delta < 1e-6);
  const auto r5 = fourier_report(chain, rat, 5, 6);
  CHECK(!r5.multiint);
  REQUIRE(r5.product_form);
  CHECK(*r5.discrepancy == doctest::Approx(std::abs(r5.direct - *r5.product_form)));
  CHECK(*r5.discrepancy < 1e-7);

  CHECK(kind_of([&] { fourier_report(chain, FourierTarget::rational(-0.25), 0, 6); }) == ErrorKind::OnSupport);
}
