#include "secmeas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "secmeas/error.hpp"
#include "secmeas/fourier.hpp"

namespace secmeas {

namespace {

constexpr int kChainLevels = 12;

// Closed forms of the integral identity for the built-in families as a
// function of the integrand polynomial index j.
std::optional<double> closed_form_43(const std::string& family, int j) {
  const double d = j;
  if (family == "lebesgue01") return (d + 1) * (d + 1) / (4.0 * (2 * d + 1) * (2 * d + 3));
  if (family == "exponential") return (d + 1) * (d + 1);
  if (family == "gaussian") return d + 1;
  if (family == "chebyshev2") return 0.25;
  if (family == "chebyshev2_01") return 1.0 / 16.0;
  return std::nullopt;
}

double family_tolerance(const MeasureFamily& fam) { return fam.support().bounded() ? 1e-6 : 1e-4; }

int param_int(const CheckParams& p, const std::string& key) {
  const double v = p.at(key);
  if (v != std::floor(v)) {
    std::ostringstream msg;
    msg << "parameter " << key << " must be an integer, got " << v;
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  return static_cast<int>(v);
}

Polynomial random_polynomial(int degree, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree + 1));
  for (auto& v : c) v = coeff(gen);
  if (degree > 0 && std::abs(c.back()) < 0.1) c.back() = 0.5;
  return Polynomial(std::move(c));
}

// A point a little off the support where transforms are well conditioned.
Complex near_point(const Interval& s) {
  switch (s.kind) {
    case SupportKind::Compact: return {s.upper + 0.25 * (s.upper - s.lower), 0.3};
    case SupportKind::HalfLine: return {s.lower - 1.0, 0.5};
    case SupportKind::RealLine: break;
  }
  return {0.5, 1.0};
}

double interior_point(const Interval& s) {
  switch (s.kind) {
    case SupportKind::Compact: return s.lower + 0.3 * (s.upper - s.lower);
    case SupportKind::HalfLine: return s.lower + 1.5;
    case SupportKind::RealLine: break;
  }
  return 0.7;
}

double level_quadrature(const SecondaryChain& chain, int level, const std::function<double(double)>& g,
                        double tol) {
  IntegrationOptions opt;
  opt.tol = tol;
  return integrate([&](double x) {
    const double rho = chain.density(level, x);
    return rho == 0.0 ? 0.0 : g(x) * rho;
  }, chain.base_family().support(), opt).value;
}

struct Outcome {
  Complex expected;
  Complex actual;
  double tolerance = 0.0;
  bool absolute = false;
  bool complex_valued = false;
  std::string diagnostic;
  bool extra_failure = false;
};

Outcome outcome(Complex expected, Complex actual, double tolerance, bool absolute = false) {
  Outcome o;
  o.expected = expected;
  o.actual = actual;
  o.tolerance = tolerance;
  o.absolute = absolute;
  return o;
}

using CheckFn = std::function<Outcome(const SecondaryChain&, const CheckParams&)>;

struct Requirements {
  bool density = false;
  bool reducer = false;
  bool stieltjes = false;
  bool compact = false;
};

struct Entry {
  CheckInfo info;
  Requirements needs;
  CheckFn fn;
  std::function<bool(const MeasureFamily&)> applies;
  std::function<std::vector<CheckParams>(const MeasureFamily&, int)> sweep;
};

double tolerance_or(const CheckParams& p, double fallback) {
  const auto it = p.find("tolerance");
  return it == p.end() ? fallback : it->second;
}

std::vector<CheckParams> range_param(const std::string& key, int lo, int hi) {
  std::vector<CheckParams> out;
  for (int n = lo; n <= hi; ++n) out.push_back({{key, n}});
  return out;
}

Outcome integral_identity(const SecondaryChain& chain, const CheckParams& p, bool first_moment) {
  const int n = param_int(p, "n");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "identity needs n >= 1");
  const auto& fam = chain.base_family();
  const double t_prev = chain.level_coeffs(n - 1).t;
  IntegrationOptions opt;
  opt.tol = 1e-10;
  const double value = integrate([&](double x) {
    const double rho = fam.density(x);
    if (rho == 0.0) return 0.0;
    const double w = rho / chain.bracket(n - 1, x).norm2();
    return first_moment ? x * w : w;
  }, fam.support(), opt).value;

  Outcome out;
  out.actual = value;
  out.expected = first_moment ? chain.level_coeffs(n).s * t_prev * t_prev : t_prev * t_prev;
  out.tolerance = tolerance_or(p, family_tolerance(fam));
  if (first_moment) return out;

  // Closed forms read at the integrand index n - 1 and at n.
  const auto at_integrand = closed_form_43(fam.name(), n - 1);
  const auto at_shifted = closed_form_43(fam.name(), n);
  if (at_integrand && at_shifted) {
    const double ref = out.expected.real();
    const bool integrand_ok = std::abs(*at_integrand - ref) <= out.tolerance * std::abs(ref);
    const bool shifted_ok = std::abs(*at_shifted - ref) <= out.tolerance * std::abs(ref);
    std::ostringstream msg;
    msg << "closed form at integrand index " << n - 1 << ": " << *at_integrand
        << (integrand_ok ? " (matches)" : " (differs)") << "; at index " << n << ": " << *at_shifted
        << (shifted_ok ? " (matches)" : " (differs)");
    out.diagnostic = msg.str();
    out.extra_failure = !integrand_ok && !shifted_ok;
  }
  return out;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto always = [](const MeasureFamily&) { return true; };

    t.push_back({{"assoc_orthogonality", "Gram matrix of the orthonormal system of rho_level under rho_level",
                  {{"level", 1}, {"N", 4}}},
                 {true, false, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int level = param_int(p, "level"), N = param_int(p, "N");
                   const auto sys = chain.level_system(level, N);
                   const double tol = chain.base_family().support().bounded() ? 1e-12 : 1e-10;
                   double worst = 0.0;
                   for (int i = 0; i <= N; ++i) {
                     for (int j = i; j <= N; ++j) {
                       const auto& pi = sys.P[static_cast<std::size_t>(i)];
                       const auto& pj = sys.P[static_cast<std::size_t>(j)];
                       const double g = level_quadrature(chain, level, [&](double x) { return pi(x) * pj(x); }, tol);
                       worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
                     }
                   }
                   Outcome o = outcome(0.0, worst, tolerance_or(p, family_tolerance(chain.base_family())), true);
                   o.diagnostic = "largest Gram entry deviation from the identity";
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int level = 1; level <= std::min(max_n, 3); ++level) out.push_back({{"level", level}, {"N", 4}});
                   return out;
                 }});

    t.push_back({{"assoc_routes", "closed form, transfer matrices and shifted recurrence give the same P_n^{k+1}",
                  {{"k", 0}, {"N", 4}}},
                 {},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int k = param_int(p, "k"), N = param_int(p, "N");
                   const auto closed = chain.associated_system(k, N);
                   const auto matrix = chain.associated_system_matrix(k, N);
                   const auto shifted = chain.associated_system_shifted(k, N);
                   double worst = 0.0;
                   for (int n = 0; n <= N; ++n) {
                     const auto i = static_cast<std::size_t>(n);
                     worst = std::max({worst, coefficient_distance(closed.P[i], shifted.P[i]),
                                       coefficient_distance(matrix.P[i], shifted.P[i]),
                                       coefficient_distance(closed.Q[i], shifted.Q[i]),
                                       coefficient_distance(matrix.Q[i], shifted.Q[i])});
                   }
                   Outcome o = outcome(0.0, worst, tolerance_or(p, 1e-8), true);
                   o.diagnostic = "largest relative coefficient distance between routes";
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int k = 0; k <= std::min(max_n, 3); ++k) out.push_back({{"k", k}, {"N", 4}});
                   return out;
                 }});

    t.push_back({{"cf_exact", "finite continued fraction closed by S_{depth+1} reproduces S_rho",
                  {{"depth", 0}, {"z_re", NAN}, {"z_im", NAN}}},
                 {false, false, true, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int depth = param_int(p, "depth");
                   Complex z = near_point(chain.base_family().support());
                   if (p.count("z_re")) z.real(p.at("z_re"));
                   if (p.count("z_im")) z.imag(p.at("z_im"));
                   Outcome o = outcome(chain.base_family().stieltjes(z), chain.continued_fraction_eval(depth, z),
                             tolerance_or(p, 1e-9));
                   o.complex_valued = true;
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("depth", 0, std::min(max_n, 8)); }});

    t.push_back({{"chain_moments", "mean (order 1) and variance (order 2) of rho_n equal s_n and t_n^2",
                  {{"n", 1}, {"order", 1}}},
                 {true, true, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n"), order = param_int(p, "order");
                   const auto c = chain.level_coeffs(n);
                   const auto& fam = chain.base_family();
                   const double tol = fam.support().bounded() ? 1e-12 : 1e-10;
                   Outcome o;
                   o.tolerance = tolerance_or(p, family_tolerance(fam));
                   if (order == 1) {
                     o.expected = c.s;
                     o.actual = level_quadrature(chain, n, [](double x) { return x; }, tol);
                     // A vanishing mean is compared absolutely.
                     o.absolute = c.s == 0.0;
                   } else if (order == 2) {
                     o.expected = c.t * c.t;
                     o.actual = level_quadrature(chain, n, [&](double x) { return (x - c.s) * (x - c.s); }, tol);
                   } else {
                     throw Error(ErrorKind::InvalidArgument, "chain_moments order must be 1 or 2");
                   }
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int n = 1; n <= max_n; ++n)
                     for (int order = 1; order <= 2; ++order) out.push_back({{"n", n}, {"order", order}});
                   return out;
                 }});

    t.push_back({{"chain_reduction", "<f, P_m> equals d_0^0...d_0^{m-1} <F_{m-1} f, F_{m-1} P_m>_m",
                  {{"m", 1}, {"degree", 5}, {"seed", 1}}},
                 {true, true, false, true},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int m = param_int(p, "m"), degree = param_int(p, "degree");
                   const auto f = random_polynomial(degree, static_cast<std::uint64_t>(param_int(p, "seed")));
                   const auto r = chain_reduction_check(chain, f, m);
                   Outcome o = outcome(r.lhs, r.rhs, tolerance_or(p, 1e-7), true);
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.support().bounded(); },
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int m = 1; m <= std::min(max_n, 3); ++m) out.push_back({{"m", m}, {"degree", 5}, {"seed", m}});
                   return out;
                 }});

    t.push_back({{"density_normalization", "rho_n integrates to one", {{"n", 1}}},
                 {true, true, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const auto& fam = chain.base_family();
                   const double tol = fam.support().bounded() ? 1e-12 : 1e-10;
                   Outcome o = outcome(1.0, level_quadrature(chain, n, [](double) { return 1.0; }, tol),
                             tolerance_or(p, family_tolerance(fam)));
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, max_n); }});

    t.push_back({{"eigenproduct", "C_n(1/(x+a)) by direct quadrature against -(1/a_n) prod S_k(-a)",
                  {{"n", 0}, {"a", 1}}},
                 {true, true, true, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const double a = p.at("a");
                   check_rational_shift(chain.base_family(), a);
                   const double direct = fourier_direct(chain.base(), [a](double x) { return 1.0 / (x + a); }, n);
                   Outcome o = outcome(direct, eigen_product(chain, a, n), tolerance_or(p, 1e-7), true);
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.support().kind != SupportKind::RealLine; },
                 [](const MeasureFamily& f, int max_n) {
                   // a = 2 keeps -a off [-1, 1].
                   const double a = f.support().lower < 0.0 ? 2.0 : 1.0;
                   std::vector<CheckParams> out;
                   for (int n = 0; n <= max_n; ++n) out.push_back({{"n", n}, {"a", a}});
                   return out;
                 }});

    t.push_back({{"fixed_point", "rho_n equals rho on a 101-point grid", {{"n", 1}}},
                 {true, true, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const auto& s = chain.base_family().support();
                   double worst = 0.0;
                   for (int i = 0; i <= 100; ++i) {
                     const double x = s.lower + (s.upper - s.lower) * i / 100.0;
                     if (!s.interior(x)) continue;
                     worst = std::max(worst, std::abs(chain.density(n, x) - chain.base_family().density(x)));
                   }
                   Outcome o = outcome(0.0, worst, tolerance_or(p, 1e-8), true);
                   o.diagnostic = "largest |rho_n - rho| over interior grid points";
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.name() == "chebyshev2"; },
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, max_n); }});

    t.push_back({{"genfun", "partial sum of t^{n+1} P_n(x) against t / ((t+1)^2 - 4 t x)",
                  {{"t", 0.3}, {"x", 0.5}, {"N", 30}}},
                 {},
                 [](const SecondaryChain&, const CheckParams& p) {
                   const auto g = generating_function_check(p.at("t"), p.at("x"), param_int(p, "N"));
                   Outcome o = outcome(g.closed_form, g.partial_sum, tolerance_or(p, 1e-10), true);
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.name() == "chebyshev2_01"; },
                 [](const MeasureFamily&, int) {
                   return std::vector<CheckParams>{{{"t", 0.3}, {"x", 0.5}, {"N", 30}},
                                                   {{"t", -0.4}, {"x", 0.2}, {"N", 30}},
                                                   {{"t", 0.0}, {"x", 0.7}, {"N", 30}}};
                 }});

    t.push_back({{"identity_43", "integral of rho / bracket_{n-1}^2 equals t_{n-1}^2 and the closed forms",
                  {{"n", 1}}},
                 {true, true, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) { return integral_identity(chain, p, false); },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, max_n); }});

    t.push_back({{"identity_61", "first moment of the same integrand equals s_n t_{n-1}^2", {{"n", 1}}},
                 {true, true, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   auto o = integral_identity(chain, p, true);
                   o.absolute = o.expected == 0.0;
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, max_n); }});

    t.push_back({{"isometry", "<f,g>_n - <f,1>_n <g,1>_n equals d_0^n <T_n f, T_n g>_{n+1}",
                  {{"n", 0}, {"degree", 5}, {"seed", 1}}},
                 {true, true, false, true},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n"), degree = param_int(p, "degree");
                   const auto seed = static_cast<std::uint64_t>(param_int(p, "seed"));
                   const auto f = random_polynomial(degree, seed);
                   const auto g = random_polynomial(degree, seed + 1000);
                   const auto r = isometry_check(chain, f, g, n);
                   Outcome o = outcome(r.lhs, r.rhs, tolerance_or(p, 1e-7), true);
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.support().bounded(); },
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int n = 0; n <= std::min(max_n, 3); ++n) out.push_back({{"n", n}, {"degree", 5}, {"seed", n + 1}});
                   return out;
                 }});

    t.push_back({{"multiint_vs_direct", "multiple-integral Fourier coefficient against direct quadrature",
                  {{"n", 0}, {"degree", 6}, {"seed", 1}, {"m", 4}}},
                 {true, false, false, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n"), degree = param_int(p, "degree"), m = param_int(p, "m");
                   const auto f = random_polynomial(degree, static_cast<std::uint64_t>(param_int(p, "seed")));
                   const double direct = fourier_direct(chain.base(), [&](double x) { return f(x); }, n);
                   Outcome o = outcome(direct, fourier_multiint(chain, f, n, m), tolerance_or(p, 1e-7), true);
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) {
                   std::vector<CheckParams> out;
                   for (int n = 0; n <= std::min(max_n, kMaxMultiintOrder); ++n)
                     out.push_back({{"n", n}, {"degree", 6}, {"seed", n + 1}, {"m", 4}});
                   return out;
                 }});

    t.push_back({{"pade_asym", "z^{2n+3} (S - Q_{n+1}/P_{n+1}) tends to d_0^0...d_0^n",
                  {{"n", 0}, {"z_re", 0}, {"z_im", 1e4}}},
                 {false, false, true, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   Complex z(0.0, 1e4);
                   if (p.count("z_re")) z.real(p.at("z_re"));
                   if (p.count("z_im")) z.imag(p.at("z_im"));
                   const auto r = pade_check(chain, n, z);
                   Outcome o = outcome(r.rhs, r.lhs, tolerance_or(p, 1e-2));
                   o.complex_valued = true;
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 0, max_n); }});

    t.push_back({{"product_identity", "P_n^2 - P_{n-1} P_{n+1} = 1 coefficientwise", {{"n", 1}}},
                 {},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const auto& sys = chain.base();
                   if (n < 1 || n + 1 > sys.size()) throw Error(ErrorKind::IndexOutOfRange, "product_identity index");
                   const auto i = static_cast<std::size_t>(n);
                   Polynomial lhs = sys.P[i] * sys.P[i];
                   lhs -= sys.P[i - 1] * sys.P[i + 1];
                   Outcome o = outcome(1.0, lhs[0], tolerance_or(p, 1e-9), true);
                   o.actual = 1.0 + coefficient_distance(lhs, Polynomial::constant(1.0)) * std::max(1.0, std::abs(lhs[0]));
                   o.diagnostic = "actual = 1 + largest coefficient deviation";
                   return o;
                 },
                 [](const MeasureFamily& f) { return f.name() == "chebyshev2"; },
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, std::max(max_n, 10)); }});

    t.push_back({{"reducer_limit", "phi_n(x) equals S_n(x - i eps) + S_n(x + i eps) for small eps",
                  {{"n", 1}, {"x", NAN}, {"eps", 1e-6}}},
                 {true, true, true, false},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const double x = p.count("x") ? p.at("x") : interior_point(chain.base_family().support());
                   const double eps = p.count("eps") ? p.at("eps") : 1e-6;
                   const Complex sum = chain.stieltjes(n, {x, -eps}) + chain.stieltjes(n, {x, eps});
                   Outcome o = outcome(sum.real(), chain.reducer(n, x), tolerance_or(p, 1e-4), true);
                   o.diagnostic = "expected is the eps-limit sum of the level transform";
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 1, max_n); }});

    t.push_back({{"wronskian", "Q_{n+1} P_n - P_{n+1} Q_n = 1/t_n coefficientwise", {{"n", 0}}},
                 {},
                 [](const SecondaryChain& chain, const CheckParams& p) {
                   const int n = param_int(p, "n");
                   const auto w = wronskian_extended(chain.base_family(), n);
                   const double target = 1.0 / chain.level_coeffs(n).t;
                   Outcome o = outcome(target, 0.0, tolerance_or(p, 1e-9));
                   // Deviation of any coefficient, measured relative to 1/t_n.
                   o.actual = target * (1.0 + coefficient_distance(w, Polynomial::constant(target)));
                   o.diagnostic = "actual = (1/t_n)(1 + relative coefficient deviation)";
                   return o;
                 },
                 always,
                 [](const MeasureFamily&, int max_n) { return range_param("n", 0, std::max(max_n, 10)); }});

    std::sort(t.begin(), t.end(), [](const Entry& a, const Entry& b) { return a.info.id < b.info.id; });
    return t;
  }();
  return table;
}

const Entry& find_entry(const std::string& id) {
  for (const auto& e : entries())
    if (e.info.id == id) return e;
  throw Error(ErrorKind::UnknownCheck, "unknown check '" + id + "'");
}

bool meets(const Requirements& r, const MeasureFamily& f) {
  if (r.density && !f.has_density()) return false;
  if (r.reducer && !f.has_reducer()) return false;
  if (r.stieltjes && !f.has_stieltjes()) return false;
  if (r.compact && !f.support().bounded()) return false;
  return true;
}

CheckParams with_defaults(const Entry& e, const CheckParams& params) {
  CheckParams out = params;
  for (const auto& [k, v] : e.info.defaults)
    if (!std::isnan(v)) out.emplace(k, v);
  return out;
}

nlohmann::ordered_json complex_json(Complex v, bool complex_valued) {
  if (!complex_valued) return v.real();
  return nlohmann::ordered_json::array({v.real(), v.imag()});
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool is_registered_check(const std::string& id) {
  return std::any_of(entries().begin(), entries().end(), [&](const Entry& e) { return e.info.id == id; });
}

const std::vector<IdentityCoverage>& identity_coverage() {
  static const std::vector<IdentityCoverage> cov = {
      {"density of rho_n from level-0 data", {"density_normalization", "fixed_point"}},
      {"integral of rho over the squared bracket equals t_{n-1}^2", {"identity_43"}},
      {"closed-form values of that integral for the worked families", {"identity_43"}},
      {"first-moment integral equals s_n t_{n-1}^2", {"identity_61", "chain_moments"}},
      {"reducer of rho_n", {"reducer_limit"}},
      {"covariance isometry under the secondary operator", {"isometry"}},
      {"level-n isometry with the factor d_0^n", {"isometry"}},
      {"chain reduction through F_{m-1}", {"chain_reduction"}},
      {"associated polynomials from level-0 P and Q", {"assoc_routes", "assoc_orthogonality"}},
      {"matrix recurrence for associated polynomials", {"assoc_routes"}},
      {"multiple-integral Fourier coefficient", {"multiint_vs_direct"}},
      {"eigenfunction product formula", {"eigenproduct"}},
      {"generating function of the chebyshev2_01 polynomials", {"genfun"}},
      {"Wronskian of P and Q", {"wronskian"}},
      {"Pade order of Q_{n+1}/P_{n+1}", {"pade_asym"}},
      {"continued fraction with closed-form tail", {"cf_exact"}},
      {"Chebyshev fixed point and P_n^2 - P_{n-1} P_{n+1} = 1", {"fixed_point", "product_identity"}},
  };
  return cov;
}

bool check_applies(const std::string& check_id, const MeasureFamily& family) {
  const auto& e = find_entry(check_id);
  return meets(e.needs, family) && e.applies(family);
}

std::vector<CheckParams> suite_params(const std::string& check_id, const MeasureFamily& family, int max_n) {
  const auto& e = find_entry(check_id);
  auto sets = e.sweep(family, max_n);
  for (auto& s : sets) s = with_defaults(e, s);
  return sets;
}

CheckResult run_check(const std::string& check_id, const SecondaryChain& chain, const CheckParams& params) {
  const auto& e = find_entry(check_id);
  CheckResult r;
  r.check_id = check_id;
  r.family = chain.base_family().name();
  r.params = with_defaults(e, params);
  if (!meets(e.needs, chain.base_family()) || !e.applies(chain.base_family())) {
    r.diagnostic = "check does not apply to family " + r.family;
    r.rel_error = INFINITY;
    return r;
  }
  try {
    const Outcome o = e.fn(chain, r.params);
    r.expected = o.expected;
    r.actual = o.actual;
    r.complex_valued = o.complex_valued;
    r.tolerance = o.tolerance;
    r.absolute = o.absolute;
    r.diagnostic = o.diagnostic;
    const double diff = std::abs(o.actual - o.expected);
    const double scale = o.absolute ? std::max(1.0, std::abs(o.expected)) : std::abs(o.expected);
    r.rel_error = scale > 0.0 ? diff / scale : diff;
    r.passed = std::isfinite(r.rel_error) && r.rel_error <= r.tolerance && !o.extra_failure;
    if (o.extra_failure) r.diagnostic += "; no closed-form reading matches the recurrence";
  } catch (const std::exception& ex) {
    r.passed = false;
    r.rel_error = INFINITY;
    r.diagnostic = ex.what();
  }
  return r;
}

CheckResult run_check(const std::string& check_id, const std::string& family, const CheckParams& params) {
  find_entry(check_id);
  const SecondaryChain chain(get_family(family), kChainLevels);
  return run_check(check_id, chain, params);
}

std::vector<CheckResult> run_suite(const std::vector<MeasureFamily>& families, const SuiteOptions& options) {
  std::vector<std::string> ids = options.checks;
  if (ids.empty())
    for (const auto& e : entries()) ids.push_back(e.info.id);
  for (const auto& id : ids) find_entry(id);

  struct Job {
    std::string id;
    const SecondaryChain* chain;
    CheckParams params;
  };
  std::vector<SecondaryChain> chains;
  chains.reserve(families.size());
  for (const auto& f : families) chains.emplace_back(f, kChainLevels);

  std::vector<Job> jobs;
  for (const auto& id : ids)
    for (const auto& chain : chains)
      if (check_applies(id, chain.base_family()))
        for (auto& p : suite_params(id, chain.base_family(), options.max_n)) jobs.push_back({id, &chain, std::move(p)});

  std::vector<CheckResult> results(jobs.size());
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run_check(jobs[i].id, *jobs[i].chain, jobs[i].params);
  } else {
    std::vector<std::future<void>> workers;
    for (int w = 0; w < threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < jobs.size(); i += static_cast<std::size_t>(threads))
          results[i] = run_check(jobs[i].id, *jobs[i].chain, jobs[i].params);
      }));
    }
    for (auto& f : workers) f.get();
  }
  std::stable_sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
    return std::tie(a.check_id, a.family, a.params) < std::tie(b.check_id, b.family, b.params);
  });
  return results;
}

SuiteSummary summarize(const std::vector<CheckResult>& results) {
  SuiteSummary s;
  s.total = static_cast<int>(results.size());
  s.passed = static_cast<int>(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; }));
  s.failed = s.total - s.passed;
  return s;
}

std::string to_json_line(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["check_id"] = r.check_id;
  j["family"] = r.family;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) {
    if (v == std::trunc(v) && std::abs(v) < 9e15)
      params[k] = static_cast<long long>(v);
    else
      params[k] = v;
  }
  j["params"] = params;
  j["expected"] = complex_json(r.expected, r.complex_valued);
  j["actual"] = complex_json(r.actual, r.complex_valued);
  j["rel_error"] = std::isfinite(r.rel_error) ? nlohmann::ordered_json(r.rel_error) : nlohmann::ordered_json(nullptr);
  j["tolerance"] = r.tolerance;
  j["absolute"] = r.absolute;
  j["passed"] = r.passed;
  j["diagnostic"] = r.diagnostic;
  return j.dump();
}

std::string to_json_line(const SuiteSummary& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}};
  return j.dump();
}

}  // namespace secmeas
