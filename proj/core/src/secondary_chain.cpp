#include "secmeas/secondary_chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secmeas/error.hpp"

namespace secmeas {

namespace {

constexpr double kCancellationLimit = 1e6;

template <typename T>
struct PQPair {
  T p_prev{}, q_prev{};  // index n - 1 (zero for n = 0)
  T p{}, q{};            // index n
};

}  // namespace

struct SecondaryChain::Impl {
  MeasureFamily family;
  int max_level;
  OrthoSystem sys;
  RecurrenceTable rec;
  QuadratureRule far_rule;

  Impl(MeasureFamily fam, int levels, int system_size)
      : family(std::move(fam)),
        max_level(levels),
        sys(generate(family, system_size)),
        rec(family.recurrence_table(family.max_index() + 1)),
        far_rule(gauss_rule(rec, std::min(family.max_index() + 1, 32))) {}

  const RecurrenceCoeffs& coeffs(int n) const {
    if (n < 0 || n >= static_cast<int>(rec.size())) {
      std::ostringstream msg;
      msg << family.name() << ": level " << n << " beyond the recurrence table";
      throw Error(ErrorKind::IndexOutOfRange, msg.str());
    }
    return rec[static_cast<std::size_t>(n)];
  }

  void check_level(int n) const {
    if (n < 0 || n > max_level) {
      std::ostringstream msg;
      msg << "level " << n << " outside [0, " << max_level << "]";
      throw Error(ErrorKind::IndexOutOfRange, msg.str());
    }
  }

  // P and Q values by the recurrence itself, which is better conditioned
  // than Horner on monomial coefficients.
  template <typename T>
  PQPair<T> values(int n, T x) const {
    PQPair<T> out;
    out.p = T(1.0);
    out.q = T(0.0);
    if (n == 0) return out;
    const auto& r0 = coeffs(0);
    out.p_prev = out.p;
    out.q_prev = out.q;
    out.p = (x - r0.s) / r0.t;
    out.q = T(1.0 / r0.t);
    for (int k = 1; k < n; ++k) {
      const auto& r = coeffs(k);
      const double t_prev = coeffs(k - 1).t;
      const T p_next = ((x - r.s) * out.p - t_prev * out.p_prev) / r.t;
      const T q_next = ((x - r.s) * out.q - t_prev * out.q_prev) / r.t;
      out.p_prev = out.p;
      out.q_prev = out.q;
      out.p = p_next;
      out.q = q_next;
    }
    return out;
  }

  Bracket bracket(int index, double x) const {
    const auto v = values(index, x);
    const double half_phi = 0.5 * family.reducer(x);
    return {v.p * half_phi - v.q, kPi * family.density(x) * v.p};
  }

  double density(int n, double x) const {
    check_level(n);
    if (n == 0) return family.density(x);
    // At an endpoint either rho vanishes or phi diverges logarithmically;
    // both send rho_n to zero.
    if (!family.support().interior(x)) return 0.0;
    const double rho = family.density(x);
    if (rho == 0.0) return 0.0;
    const Bracket b = bracket(n - 1, x);
    const double denom = b.norm2();
    if (denom < 1e-300) {
      std::ostringstream msg;
      msg << "density level " << n << " at x = " << x;
      throw Error(ErrorKind::DegenerateDenominator, msg.str());
    }
    const double t = coeffs(n - 1).t;
    return rho / (t * t * denom);
  }

  double reducer(int n, double x) const {
    check_level(n);
    if (n == 0) return family.reducer(x);
    const double rho = family.density(x);
    const auto v = values(n, x);
    const double half_phi = 0.5 * family.reducer(x);
    const double a_prev = v.p_prev * half_phi - v.q_prev, a_cur = v.p * half_phi - v.q;
    const double b_prev = kPi * rho * v.p_prev, b_cur = kPi * rho * v.p;
    const double denom = a_prev * a_prev + b_prev * b_prev;
    if (denom < 1e-300) {
      std::ostringstream msg;
      msg << "reducer level " << n << " at x = " << x;
      throw Error(ErrorKind::DegenerateDenominator, msg.str());
    }
    return 2.0 / coeffs(n - 1).t * (a_cur * a_prev + b_cur * b_prev) / denom;
  }

  Complex remainder_far(int n, Complex z) const {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < far_rule.size(); ++i) {
      const double x = far_rule.nodes[i];
      const Complex ratio = std::pow(Complex(x) / z, n);
      acc += far_rule.weights[i] * values(n, x).p * ratio / (z - x);
    }
    return acc;
  }

  Complex remainder(int n, Complex z) const {
    const Complex s = family.stieltjes(z);
    const auto v = values(n, z);
    const Complex direct = v.p * s - v.q;
    const double scale = std::abs(v.p * s);
    if (std::abs(direct) * kCancellationLimit >= scale) return direct;
    return remainder_far(n, z);
  }

  Complex stieltjes(int n, Complex z) const {
    check_level(n);
    if (n == 0) return family.stieltjes(z);
    const Complex num = remainder(n, z);
    const Complex den = remainder(n - 1, z);
    if (den == 0.0) {
      std::ostringstream msg;
      msg << "S_" << n << " denominator vanished at z = " << z;
      throw Error(ErrorKind::ZeroDivision, msg.str());
    }
    return num / (coeffs(n - 1).t * den);
  }
};

SecondaryChain::SecondaryChain(MeasureFamily base, int max_level, int system_size) {
  if (max_level < 0) throw Error(ErrorKind::InvalidArgument, "max_level must be nonnegative");
  const int limit = base.max_index();
  if (system_size <= 0) system_size = std::min(limit, std::max(max_level + 8, 16));
  if (system_size > limit || max_level + 1 > limit)
    throw Error(ErrorKind::IndexOutOfRange, "chain exceeds the family recurrence table");
  impl_ = std::make_shared<const Impl>(std::move(base), max_level, system_size);
}

const MeasureFamily& SecondaryChain::base_family() const noexcept { return impl_->family; }
const OrthoSystem& SecondaryChain::base() const noexcept { return impl_->sys; }
int SecondaryChain::max_level() const noexcept { return impl_->max_level; }

RecurrenceCoeffs SecondaryChain::level_coeffs(int n) const { return impl_->coeffs(n); }

double SecondaryChain::density(int n, double x) const { return impl_->density(n, x); }
double SecondaryChain::reducer(int n, double x) const { return impl_->reducer(n, x); }
Complex SecondaryChain::stieltjes(int n, Complex z) const { return impl_->stieltjes(n, z); }

Complex SecondaryChain::remainder(int n, Complex z) const {
  if (n < 0) throw Error(ErrorKind::IndexOutOfRange, "remainder index must be nonnegative");
  return impl_->remainder(n, z);
}

SecondaryChain::Bracket SecondaryChain::bracket(int index, double x) const { return impl_->bracket(index, x); }

Complex SecondaryChain::continued_fraction_eval(int depth, Complex z) const {
  if (depth < 0 || depth + 1 > impl_->max_level)
    throw Error(ErrorKind::IndexOutOfRange, "continued fraction depth needs depth + 1 <= max_level");
  Complex s = stieltjes(depth + 1, z);
  for (int n = depth; n >= 0; --n) {
    const auto& r = impl_->coeffs(n);
    const Complex denom = z - r.s - r.t * r.t * s;
    if (denom == 0.0) {
      std::ostringstream msg;
      msg << "continued fraction denominator vanished at level " << n << ", z = " << z;
      throw Error(ErrorKind::ZeroDivision, msg.str());
    }
    s = 1.0 / denom;
  }
  return s;
}

Complex SecondaryChain::convergent_form(int depth, Complex z) const {
  if (depth < 0 || depth + 1 > impl_->max_level)
    throw Error(ErrorKind::IndexOutOfRange, "convergent depth needs depth + 1 <= max_level");
  // u_0 = 0, u_1 = 1; v_0 = 1, v_1 = z - c_1^0; w_{k+1} = (z - c_1^k) w_k - d_0^{k-1} w_{k-1}.
  Complex u_prev = 0.0, u = 1.0;
  Complex v_prev = 1.0, v = z - impl_->coeffs(0).s;
  for (int k = 1; k <= depth; ++k) {
    const auto& r = impl_->coeffs(k);
    const double d_prev = impl_->coeffs(k - 1).t * impl_->coeffs(k - 1).t;
    const Complex u_next = (z - r.s) * u - d_prev * u_prev;
    const Complex v_next = (z - r.s) * v - d_prev * v_prev;
    u_prev = u;
    u = u_next;
    v_prev = v;
    v = v_next;
  }
  const double t = impl_->coeffs(depth).t;
  const Complex tail = -t * t * stieltjes(depth + 1, z);
  const Complex denom = v_prev * tail + v;
  if (denom == 0.0) throw Error(ErrorKind::ZeroDivision, "convergent denominator vanished");
  return (u_prev * tail + u) / denom;
}

MeasureFamily SecondaryChain::level_family(int n) const {
  impl_->check_level(n);
  if (n == 0) return impl_->family;
  FamilyDefinition def;
  def.name = impl_->family.name() + "@" + std::to_string(n);
  def.support = impl_->family.support();
  def.max_index = impl_->family.max_index() - n;
  auto impl = impl_;
  def.recurrence = [impl, n](int k) { return impl->coeffs(n + k); };
  if (impl->family.has_density() && impl->family.has_reducer()) {
    def.density = [impl, n](double x) { return impl->density(n, x); };
    def.reducer = [impl, n](double x) { return impl->reducer(n, x); };
  }
  if (impl->family.has_stieltjes()) def.stieltjes = [impl, n](Complex z) { return impl->stieltjes(n, z); };
  return MeasureFamily(std::move(def));
}

namespace {

void check_assoc_range(const OrthoSystem& sys, int k, int N) {
  if (k < 0 || N < 0 || k + 1 + N > sys.size()) {
    std::ostringstream msg;
    msg << "associated system k = " << k << ", N = " << N << " needs base size >= " << k + 1 + N;
    throw Error(ErrorKind::IndexOutOfRange, msg.str());
  }
}

OrthoSystem finish_system(MeasureFamily family, std::vector<Polynomial> P, std::vector<Polynomial> Q) {
  OrthoSystem out{std::move(family), std::move(P), std::move(Q), {}};
  for (const auto& p : out.P) out.a.push_back(p.leading());
  return out;
}

}  // namespace

OrthoSystem SecondaryChain::associated_system(int k, int N) const {
  const auto& sys = impl_->sys;
  check_assoc_range(sys, k, N);
  const double tk = impl_->coeffs(k).t;
  const auto uk = static_cast<std::size_t>(k);
  std::vector<Polynomial> P, Q;
  for (int n = 0; n <= N; ++n) {
    const auto j = static_cast<std::size_t>(n + k + 1);
    P.push_back((sys.P[uk] * sys.Q[j] - sys.Q[uk] * sys.P[j]) * tk);
    Q.push_back(sys.P[uk + 1] * sys.Q[j] - sys.P[j] * sys.Q[uk + 1]);
  }
  return finish_system(level_family(k + 1), std::move(P), std::move(Q));
}

OrthoSystem SecondaryChain::associated_system_matrix(int k, int N) const {
  const auto& sys = impl_->sys;
  check_assoc_range(sys, k, N);
  // Pi = M_k ... M_0, accumulated left-multiplicatively.
  Polynomial m00{1.0}, m01{}, m10{}, m11{1.0};
  for (int j = 0; j <= k; ++j) {
    const auto& r = impl_->coeffs(j);
    const Polynomial x_minus_s{-r.s, 1.0};
    Polynomial n00 = m10 * r.t, n01 = m11 * r.t;
    Polynomial n10 = (x_minus_s * m10 - m00) * (1.0 / r.t);
    Polynomial n11 = (x_minus_s * m11 - m01) * (1.0 / r.t);
    m00 = std::move(n00);
    m01 = std::move(n01);
    m10 = std::move(n10);
    m11 = std::move(n11);
  }
  std::vector<Polynomial> P, Q;
  for (int n = 0; n <= N; ++n) {
    const auto j = static_cast<std::size_t>(n + k + 1);
    P.push_back(m00 * sys.P[j] + m01 * sys.Q[j]);
    Q.push_back(m10 * sys.P[j] + m11 * sys.Q[j]);
  }
  return finish_system(level_family(k + 1), std::move(P), std::move(Q));
}

OrthoSystem SecondaryChain::associated_system_shifted(int k, int N) const {
  check_assoc_range(impl_->sys, k, N);
  const auto fam = level_family(k + 1);
  return generate(fam, fam.recurrence_table(std::max(N, 1)), N);
}

OrthoSystem SecondaryChain::level_system(int level, int N) const {
  if (level == 0) {
    if (N > impl_->sys.size()) throw Error(ErrorKind::IndexOutOfRange, "level_system beyond base size");
    std::vector<Polynomial> P(impl_->sys.P.begin(), impl_->sys.P.begin() + N + 1);
    std::vector<Polynomial> Q(impl_->sys.Q.begin(), impl_->sys.Q.begin() + N + 1);
    return finish_system(impl_->family, std::move(P), std::move(Q));
  }
  return associated_system(level - 1, N);
}

QuadratureRule SecondaryChain::level_gauss_rule(int n, int m) const {
  if (n < 0 || n + m > static_cast<int>(impl_->rec.size()))
    throw Error(ErrorKind::IndexOutOfRange, "level_gauss_rule beyond the recurrence table");
  return gauss_rule(std::span<const RecurrenceCoeffs>(impl_->rec).subspan(static_cast<std::size_t>(n)), m);
}

PadeCheck pade_check(const SecondaryChain& chain, int n, Complex z) {
  if (n < 0) throw Error(ErrorKind::IndexOutOfRange, "pade_check needs n >= 0");
  const auto& fam = chain.base_family();
  if (fam.support().distance(z) < 1e-12) throw Error(ErrorKind::OnSupport, "pade_check point lies on the support");
  const Complex r = chain.remainder(n + 1, z);
  double rhs = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double t = chain.level_coeffs(k).t;
    rhs *= t * t;
  }
  Complex p = 1.0;
  {
    // P_{n+1}(z) / z^{n+1} by the value recurrence on scaled quantities.
    Complex p_prev = 0.0, cur = 1.0;
    for (int k = 0; k <= n; ++k) {
      const auto rc = chain.level_coeffs(k);
      const double t_prev = k > 0 ? chain.level_coeffs(k - 1).t : 0.0;
      const Complex next = ((1.0 - rc.s / z) * cur - t_prev * p_prev / (z * z)) / rc.t;
      p_prev = cur;
      cur = next;
    }
    p = cur;
  }
  // lhs = z^{2n+3} R_{n+1} / P_{n+1} = z^{n+2} R_{n+1} / (P_{n+1} / z^{n+1}).
  const Complex lhs = std::pow(z, n + 2) * r / p;
  return {lhs, rhs};
}

}  // namespace secmeas
