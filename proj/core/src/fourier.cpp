#include "secmeas/fourier.hpp"

#include <cmath>
#include <sstream>

#include "secmeas/error.hpp"

namespace secmeas {

namespace {

double level_integral(const SecondaryChain& chain, int level, const std::function<double(double)>& g) {
  const auto& fam = chain.base_family();
  IntegrationOptions opt;
  opt.tol = fam.support().bounded() ? 1e-12 : 1e-10;
  auto r = integrate([&](double x) {
    const double rho = chain.density(level, x);
    return rho == 0.0 ? 0.0 : g(x) * rho;
  }, fam.support(), opt);
  return r.value;
}

std::vector<double> level_moments(const SecondaryChain& chain, int level, int count) {
  if (count <= 0) return {};
  const auto table = chain.base_family().recurrence_table(count / 2 + 1, level);
  return jacobi_moments(table, count);
}

std::vector<QuadratureRule> level_rules(const SecondaryChain& chain, int n, int m) {
  // Room for the base size plus per-axis growth and three collision bumps.
  const int rows = m + n + 4;
  std::vector<RecurrenceTable> tables;
  for (int k = 0; k <= n; ++k) tables.push_back(chain.base_family().recurrence_table(rows, k));
  return collision_free_rules(tables, m);
}

void check_multiint_args(const SecondaryChain& chain, int n, int m) {
  if (n < 0 || n > kMaxMultiintOrder) {
    std::ostringstream msg;
    msg << "multiple-integral Fourier coefficient needs 0 <= n <= " << kMaxMultiintOrder << ", got " << n;
    throw Error(ErrorKind::GridTooLarge, msg.str());
  }
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "Gauss rule size must be positive");
  if (n > chain.base().size()) throw Error(ErrorKind::IndexOutOfRange, "n beyond the base system");
}

template <typename Kernel>
double multiint(const SecondaryChain& chain, Kernel&& dd, int n, int m, const TensorOptions& options) {
  check_multiint_args(chain, n, m);
  const auto rules = level_rules(chain, n, m);
  const double integral = tensor_integrate(dd, rules, options);
  return integral / chain.base().a[static_cast<std::size_t>(n)];
}

}  // namespace

double fourier_direct(const OrthoSystem& sys, const std::function<double(double)>& f, int n, double tol) {
  if (n < 0 || n > sys.size()) throw Error(ErrorKind::IndexOutOfRange, "fourier_direct index beyond the system");
  const auto& fam = sys.family;
  const auto& pn = sys.P[static_cast<std::size_t>(n)];
  IntegrationOptions opt;
  opt.tol = tol > 0.0 ? tol : fam.support().bounded() ? 1e-10 : 1e-8;
  opt.tol_abs = 1e-15;
  auto r = integrate([&](double x) {
    const double rho = fam.density(x);
    return rho == 0.0 ? 0.0 : f(x) * pn(x) * rho;
  }, fam.support(), opt);
  return r.value;
}

double fourier_multiint(const SecondaryChain& chain, const std::function<double(double)>& f, int n, int m,
                        const TensorOptions& options) {
  return multiint(chain, [&](std::span<const double> t) { return divided_difference(f, t); }, n, m, options);
}

double fourier_multiint(const SecondaryChain& chain, const Polynomial& f, int n, int m,
                        const TensorOptions& options) {
  return multiint(chain, [&](std::span<const double> t) { return divided_difference(f, t); }, n, m, options);
}

IdentityPair isometry_check(const SecondaryChain& chain, const Polynomial& f, const Polynomial& g, int n) {
  if (n < 0 || n + 1 > chain.max_level()) throw Error(ErrorKind::IndexOutOfRange, "isometry level out of range");
  const double fg = level_integral(chain, n, [&](double x) { return f(x) * g(x); });
  const double f1 = level_integral(chain, n, [&](double x) { return f(x); });
  const double g1 = level_integral(chain, n, [&](double x) { return g(x); });

  const auto moments = level_moments(chain, n, std::max({f.degree(), g.degree(), 0}));
  const Polynomial tf = apply_T(f, moments);
  const Polynomial tg = apply_T(g, moments);
  const double inner = level_integral(chain, n + 1, [&](double x) { return tf(x) * tg(x); });
  return {fg - f1 * g1, chain.level_variance(n) * inner};
}

Polynomial composed_operator(const SecondaryChain& chain, const Polynomial& f, int m) {
  Polynomial out = f;
  for (int level = 0; level < m; ++level) {
    const auto moments = level_moments(chain, level, std::max(out.degree(), 0));
    out = apply_T(out, moments);
  }
  return out;
}

IdentityPair chain_reduction_check(const SecondaryChain& chain, const Polynomial& f, int m) {
  if (m < 1 || m > chain.max_level() || m > chain.base().size())
    throw Error(ErrorKind::IndexOutOfRange, "chain reduction level out of range");
  const auto& pm = chain.base().P[static_cast<std::size_t>(m)];
  const auto& fam = chain.base_family();
  IntegrationOptions opt;
  opt.tol = fam.support().bounded() ? 1e-12 : 1e-10;
  const double lhs = integrate([&](double x) {
    const double rho = fam.density(x);
    return rho == 0.0 ? 0.0 : f(x) * pm(x) * rho;
  }, fam.support(), opt).value;

  const Polynomial ff = composed_operator(chain, f, m);
  const Polynomial fp = composed_operator(chain, pm, m);
  double scale = 1.0;
  for (int k = 0; k < m; ++k) scale *= chain.level_variance(k);
  const double inner = level_integral(chain, m, [&](double x) { return ff(x) * fp(x); });
  return {lhs, scale * inner};
}

double eigen_product(const SecondaryChain& chain, double a, int n) {
  if (n < 0 || n > chain.max_level() || n > chain.base().size())
    throw Error(ErrorKind::IndexOutOfRange, "eigen_product level out of range");
  check_rational_shift(chain.base_family(), a);
  const Complex z(-a, 0.0);
  double product = 1.0;
  for (int k = 0; k <= n; ++k) product *= chain.stieltjes(k, z).real();
  return -product / chain.base().a[static_cast<std::size_t>(n)];
}

void check_rational_shift(const MeasureFamily& family, double a) {
  if (!std::isfinite(a) || family.support().distance(Complex(-a, 0.0)) < 1e-12) {
    std::ostringstream msg;
    msg << "-a = " << -a << " lies on the support of " << family.name();
    throw Error(ErrorKind::OnSupport, msg.str());
  }
}

double apply_T_quadrature(const MeasureFamily& family, const std::function<double(double)>& f, double x) {
  const auto& s = family.support();
  if (!s.interior(x)) throw Error(ErrorKind::OutOfDomain, "apply_T_quadrature needs x inside the support");
  const double fx = f(x);
  auto quotient = [&](double t) {
    const double rho = family.density(t);
    return rho == 0.0 || t == x ? 0.0 : (f(t) - fx) / (t - x) * rho;
  };
  IntegrationOptions opt;
  opt.tol = 1e-12;
  double right, left;
  right = s.bounded() ? integrate(quotient, Interval::compact(x, s.upper), opt).value
                      : integrate(quotient, Interval::half_line(x), opt).value;
  if (s.kind == SupportKind::RealLine) {
    left = integrate([&](double u) { return quotient(-u); }, Interval::half_line(-x), opt).value;
  } else {
    left = integrate(quotient, Interval::compact(s.lower, x), opt).value;
  }
  return left + right;
}

GeneratingFunctionCheck generating_function_check(double t, double x, int N) {
  if (!(std::abs(t) < 1.0)) throw Error(ErrorKind::OutOfDomain, "generating function needs |t| < 1");
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorKind::OutOfDomain, "generating function needs x in (0, 1)");
  if (N < 0 || N > 40) throw Error(ErrorKind::OutOfDomain, "generating function needs 0 <= N <= 40");
  const auto fam = get_family("chebyshev2_01", std::max(N, kDefaultMaxRecurrence));
  // P_n(x) by the three-term recurrence of the family.
  double p_prev = 0.0, p = 1.0, power = t, sum = 0.0;
  for (int n = 0; n <= N; ++n) {
    sum += power * p;
    power *= t;
    const auto r = fam.recurrence(n);
    const double t_prev = n > 0 ? fam.recurrence(n - 1).t : 0.0;
    const double next = ((x - r.s) * p - t_prev * p_prev) / r.t;
    p_prev = p;
    p = next;
  }
  return {sum, t / ((t + 1.0) * (t + 1.0) - 4.0 * t * x)};
}

FourierTarget FourierTarget::polynomial(Polynomial p) {
  FourierTarget f;
  f.poly_ = std::move(p);
  return f;
}

FourierTarget FourierTarget::rational(double a) {
  FourierTarget f;
  f.shift_ = a;
  return f;
}

double FourierTarget::operator()(double x) const {
  if (poly_) return (*poly_)(x);
  return 1.0 / (x + *shift_);
}

FourierReport fourier_report(const SecondaryChain& chain, const FourierTarget& f, int n, int m, double tol) {
  if (auto a = f.rational_shift()) check_rational_shift(chain.base_family(), *a);
  FourierReport row;
  row.n = n;
  const std::function<double(double)> fn = [&](double x) { return f(x); };
  row.direct = fourier_direct(chain.base(), fn, n, tol);
  if (n <= kMaxMultiintOrder) {
    if (const auto* p = f.as_polynomial())
      row.multiint = fourier_multiint(chain, *p, n, m);
    else {
      row.multiint = fourier_multiint(chain, fn, n, m);
      row.refinement_delta = std::abs(*row.multiint - fourier_multiint(chain, fn, n, m + 2));
    }
  }
  if (auto a = f.rational_shift()) row.product_form = eigen_product(chain, *a, n);
  if (row.multiint)
    row.discrepancy = std::abs(row.direct - *row.multiint);
  else if (row.product_form)
    row.discrepancy = std::abs(row.direct - *row.product_form);
  return row;
}

}  // namespace secmeas
