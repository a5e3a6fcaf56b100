#include "secmeas/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "secmeas/error.hpp"
#include "secmeas/poly.hpp"

namespace secmeas {
namespace {

// Abscissae beyond |t| = 4 sit within ~1e-37 of the endpoints and carry
// weights below 1e-35; the ladder never needs them.
constexpr double kTanhSinhTMax = 4.0;

struct Node {
  double x;
  double jacobian;  // dx/dy * dy/dt
};

// Maps the tanh-sinh parameter t onto the support. Returns false when the
// node coincides with an endpoint in floating point.
bool map_node(double t, const Interval& s, Node& out) {
  const double u = 0.5 * kPi * std::sinh(t);
  const double e = std::exp(-2.0 * std::abs(u));
  const double delta = 2.0 * e / (1.0 + e);                        // 1 - |y|
  const double dydt = 0.5 * kPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
  if (dydt == 0.0 || delta == 0.0) return false;
  const bool left = t < 0.0;
  switch (s.kind) {
    case SupportKind::Compact: {
      const double hw = 0.5 * (s.upper - s.lower);
      out.x = left ? s.lower + hw * delta : s.upper - hw * delta;
      if (!(out.x > s.lower && out.x < s.upper)) return false;
      out.jacobian = hw * dydt;
      return true;
    }
    case SupportKind::HalfLine: {
      // u in (0, 1), x = a - ln u, dx/du = 1/u, du/dy = 1/2.
      const double uu = left ? 0.5 * delta : 1.0 - 0.5 * delta;
      const double lnu = left ? std::log(uu) : std::log1p(-0.5 * delta);
      out.x = s.lower - lnu;
      if (!(out.x > s.lower) || !std::isfinite(out.x)) return false;
      out.jacobian = 0.5 * dydt / uu;
      return true;
    }
    case SupportKind::RealLine: {
      const double y = left ? -(1.0 - delta) : 1.0 - delta;
      double x;
      if (std::abs(y) > 0.5) {
        x = 1.0 / std::tan(0.5 * kPi * delta);
        if (left) x = -x;
      } else {
        x = std::tan(0.5 * kPi * y);
      }
      if (!std::isfinite(x)) return false;
      out.x = x;
      out.jacobian = 0.5 * kPi * (1.0 + x * x) * dydt;
      return std::isfinite(out.jacobian);
    }
  }
  return false;
}

template <typename T>
T checked_call(const std::function<T(double)>& f, double x) {
  const T v = f(x);
  bool finite;
  if constexpr (std::is_same_v<T, Complex>)
    finite = std::isfinite(v.real()) && std::isfinite(v.imag());
  else
    finite = std::isfinite(v);
  if (!finite) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw Error(ErrorKind::NonFinite, msg.str());
  }
  return v;
}

// Contribution of the nodes t = j h with j odd (or every j at level 0).
template <typename T>
T level_sum(const std::function<T(double)>& f, const Interval& s, int level, long& evals) {
  const double h = std::ldexp(1.0, -level);
  const long jmax = static_cast<long>(kTanhSinhTMax / h);
  const long step = level == 0 ? 1 : 2;
  const long start = level == 0 ? 0 : 1;
  T sum{};
  Node node{};
  for (long j = start; j <= jmax; j += step) {
    for (int sign : {1, -1}) {
      if (j == 0 && sign < 0) continue;
      if (!map_node(sign * j * h, s, node)) continue;
      sum += checked_call(f, node.x) * node.jacobian;
      ++evals;
    }
  }
  return sum;
}

double magnitude(double v) { return std::abs(v); }
double magnitude(Complex v) { return std::abs(v); }

template <typename T>
T ladder(const std::function<T(double)>& f, const Interval& s, const IntegrationOptions& opt,
         IntegrationResult& info) {
  long evals = 0;
  T integral = level_sum(f, s, 0, evals);
  T previous = integral;
  double estimate = kInf;
  bool converged = false;
  for (int level = 1; level <= opt.max_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    const long predicted = evals + static_cast<long>(kTanhSinhTMax / h) + 2;
    if (predicted > opt.max_evaluations) break;
    previous = integral;
    integral = 0.5 * integral + h * level_sum(f, s, level, evals);
    estimate = magnitude(integral - previous);
    if (level >= opt.min_level && estimate <= std::max(opt.tol * magnitude(integral), opt.tol_abs)) {
      converged = true;
      break;
    }
  }
  info.error_estimate = estimate;
  info.evaluations = evals;
  info.converged = converged;
  return integral;
}

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f, const Interval& support,
                            const IntegrationOptions& options) {
  IntegrationResult result;
  result.value = ladder<double>(f, support, options, result);
  return result;
}

IntegrationResult integrate(const std::function<double(double)>& f, const Interval& support, double tol) {
  IntegrationOptions options;
  options.tol = tol;
  return integrate(f, support, options);
}

Complex integrate_complex(const std::function<Complex(double)>& f, const Interval& support,
                          const IntegrationOptions& options) {
  IntegrationResult info;
  return ladder<Complex>(f, support, options, info);
}

double integrate_at_level(const std::function<double(double)>& f, const Interval& support, int level) {
  long evals = 0;
  double integral = level_sum(f, support, 0, evals);
  for (int k = 1; k <= level; ++k) integral = 0.5 * integral + std::ldexp(1.0, -k) * level_sum(f, support, k, evals);
  return integral;
}

TridiagonalEigen tridiagonal_eigen(std::span<const double> diagonal, std::span<const double> offdiagonal) {
  const int n = static_cast<int>(diagonal.size());
  if (n == 0) return {};
  if (static_cast<int>(offdiagonal.size()) < n - 1)
    throw Error(ErrorKind::InvalidArgument, "off-diagonal needs n - 1 entries");
  std::vector<double> d(diagonal.begin(), diagonal.end());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy_n(offdiagonal.begin(), n - 1, e.begin());
  // First row of the accumulated rotation matrix.
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  z[0] = 1.0;

  const int max_sweeps = 50 * n;
  int sweeps = 0;
  for (int l = 0; l < n; ++l) {
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++sweeps > max_sweeps) throw Error(ErrorKind::EigenFailure, "QL iteration did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.values.reserve(order.size());
  out.first_components.reserve(order.size());
  for (std::size_t k : order) {
    out.values.push_back(d[k]);
    out.first_components.push_back(z[k]);
  }
  return out;
}

QuadratureRule gauss_rule(std::span<const RecurrenceCoeffs> recurrence, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "gauss_rule needs m >= 1");
  if (static_cast<int>(recurrence.size()) < m) {
    std::ostringstream msg;
    msg << "gauss_rule(" << m << ") needs " << m << " recurrence rows, got " << recurrence.size();
    throw Error(ErrorKind::IndexOutOfRange, msg.str());
  }
  std::vector<double> diag(static_cast<std::size_t>(m)), off(static_cast<std::size_t>(m - 1));
  for (int k = 0; k < m; ++k) diag[k] = recurrence[k].s;
  for (int k = 0; k + 1 < m; ++k) off[k] = recurrence[k].t;
  const auto eig = tridiagonal_eigen(diag, off);
  QuadratureRule rule;
  rule.kind = RuleKind::GaussJacobiMatrix;
  rule.nodes = eig.values;
  rule.weights.reserve(eig.first_components.size());
  for (double v : eig.first_components) rule.weights.push_back(v * v);
  return rule;
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

struct TensorWalker {
  const std::function<double(std::span<const double>)>& kernel;
  std::span<const QuadratureRule> rules;
  std::vector<double> args;

  // Pairwise sum over indices [lo, hi) of axis `dim`.
  double sum_axis(std::size_t dim, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 4) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(dim, i);
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return sum_axis(dim, lo, mid) + sum_axis(dim, mid, hi);
  }

  double term(std::size_t dim, std::size_t i) {
    args[dim] = rules[dim].nodes[i];
    const double w = rules[dim].weights[i];
    if (dim + 1 == rules.size()) return w * kernel(args);
    return w * sum_axis(dim + 1, 0, rules[dim + 1].size());
  }
};

}  // namespace

double tensor_integrate(const std::function<double(std::span<const double>)>& kernel,
                        std::span<const QuadratureRule> rules, const TensorOptions& options) {
  if (rules.empty()) return kernel({});
  if (static_cast<int>(rules.size()) > options.max_dimension)
    throw Error(ErrorKind::GridTooLarge, "tensor dimension exceeds the configured maximum");
  double points = 1.0;
  for (const auto& r : rules) points *= static_cast<double>(r.size());
  if (points > static_cast<double>(options.max_points)) {
    std::ostringstream msg;
    msg << "tensor grid has " << points << " points, limit " << options.max_points;
    throw Error(ErrorKind::GridTooLarge, msg.str());
  }

  const std::size_t outer = rules[0].size();
  std::vector<double> partial(outer, 0.0);
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(outer)));
  auto work = [&](unsigned id) {
    TensorWalker walker{kernel, rules, std::vector<double>(rules.size())};
    for (std::size_t i = id; i < outer; i += threads) partial[i] = walker.term(0, i);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned id = 0; id < threads; ++id)
      pool.emplace_back([&, id] {
        try {
          work(id);
        } catch (...) {
          errors[id] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return pairwise_sum(partial);
}

std::vector<QuadratureRule> collision_free_rules(std::span<const RecurrenceTable> recurrences, int base_size) {
  std::vector<QuadratureRule> rules;
  int previous = base_size - 1;
  for (std::size_t dim = 0; dim < recurrences.size(); ++dim) {
    int size = std::max(base_size + static_cast<int>(dim), previous + 1);
    for (int attempt = 0;; ++attempt) {
      QuadratureRule rule = gauss_rule(recurrences[dim], size);
      std::vector<double> all;
      for (const auto& r : rules) all.insert(all.end(), r.nodes.begin(), r.nodes.end());
      all.insert(all.end(), rule.nodes.begin(), rule.nodes.end());
      const double delta = collision_threshold(all);
      bool clash = false;
      for (const auto& r : rules)
        for (double a : r.nodes)
          for (double b : rule.nodes)
            if (std::abs(a - b) <= delta) clash = true;
      if (!clash) {
        rules.push_back(std::move(rule));
        previous = size;
        break;
      }
      if (attempt == 3) {
        std::ostringstream msg;
        msg << "dimension " << dim << " still collides after 3 size increases (size " << size << ")";
        throw Error(ErrorKind::NodeCollision, msg.str());
      }
      ++size;
    }
  }
  return rules;
}

}  // namespace secmeas
