#include "secmeas/orthosys.hpp"

#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "secmeas/error.hpp"
#include "secmeas/quad.hpp"

namespace secmeas {

OrthoSystem generate(const MeasureFamily& family, int N) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "generate needs N >= 0");
  const auto table = family.recurrence_table(std::max(N, 1));
  return generate(family, table, N);
}

OrthoSystem generate(const MeasureFamily& family, std::span<const RecurrenceCoeffs> recurrence, int N) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "generate needs N >= 0");
  if (static_cast<int>(recurrence.size()) < std::max(N, 1)) {
    std::ostringstream msg;
    msg << "generate(" << N << ") needs " << std::max(N, 1) << " recurrence rows";
    throw Error(ErrorKind::IndexOutOfRange, msg.str());
  }
  OrthoSystem sys{family, {}, {}, {}};
  sys.P.reserve(static_cast<std::size_t>(N) + 1);
  sys.Q.reserve(static_cast<std::size_t>(N) + 1);
  const auto [s0, t0] = recurrence[0];
  sys.P.push_back(Polynomial{1.0});
  sys.Q.push_back(Polynomial{});
  sys.a.push_back(1.0);
  if (N >= 1) {
    sys.P.push_back(Polynomial{-s0 / t0, 1.0 / t0});
    sys.Q.push_back(Polynomial{1.0 / t0});
    sys.a.push_back(1.0 / t0);
  }
  for (int n = 1; n < N; ++n) {
    const auto [s, t] = recurrence[n];
    const double t_prev = recurrence[n - 1].t;
    auto step = [&](const std::vector<Polynomial>& seq) {
      Polynomial next = shift_up(seq[n]) - seq[n] * s - seq[n - 1] * t_prev;
      return next * (1.0 / t);
    };
    sys.P.push_back(step(sys.P));
    sys.Q.push_back(step(sys.Q));
    sys.a.push_back(sys.a.back() / t);
  }
  return sys;
}

Polynomial apply_T(const Polynomial& f, std::span<const double> moments) {
  const int d = f.degree();
  if (d <= 0) return {};
  if (static_cast<int>(moments.size()) < d) throw Error(ErrorKind::IndexOutOfRange, "apply_T needs deg f moments");
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int j = 1; j <= d; ++j)
    for (int i = 0; i < j; ++i) out[static_cast<std::size_t>(i)] += f[j] * moments[static_cast<std::size_t>(j - 1 - i)];
  return Polynomial(std::move(out));
}

Polynomial apply_T_poly(const OrthoSystem& sys, const Polynomial& f) {
  const int d = f.degree();
  if (d <= 0) return {};
  const auto table = sys.family.recurrence_table(d / 2 + 1);
  return apply_T(f, jacobi_moments(table, d));
}

double orthonormality_check(const OrthoSystem& sys, int n, int m) {
  if (n < 0 || m < 0 || n > sys.size() || m > sys.size())
    throw Error(ErrorKind::IndexOutOfRange, "orthonormality_check index beyond the system size");
  const auto& pn = sys.P[static_cast<std::size_t>(n)];
  const auto& pm = sys.P[static_cast<std::size_t>(m)];
  const auto& fam = sys.family;
  auto r = integrate([&](double x) {
    const double rho = fam.density(x);
    return rho == 0.0 ? 0.0 : pn(x) * pm(x) * rho;
  }, fam.support(), 1e-12);
  return r.value;
}

Polynomial wronskian(const OrthoSystem& sys, int n) {
  if (n < 0 || n + 1 > sys.size()) throw Error(ErrorKind::IndexOutOfRange, "wronskian needs n + 1 <= N");
  const auto k = static_cast<std::size_t>(n);
  return sys.Q[k + 1] * sys.P[k] - sys.P[k + 1] * sys.Q[k];
}

Polynomial wronskian_extended(const MeasureFamily& family, int n) {
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  using QPoly = std::vector<Quad>;
  if (n < 0) throw Error(ErrorKind::IndexOutOfRange, "wronskian needs n >= 0");
  const auto table = family.recurrence_table(n + 1);

  auto combine = [](const QPoly& cur, const QPoly& prev, const RecurrenceCoeffs& r, double t_prev) {
    QPoly next(cur.size() + 1, Quad(0));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= Quad(r.s) * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= Quad(t_prev) * prev[i];
    for (auto& c : next) c /= Quad(r.t);
    return next;
  };
  auto multiply = [](const QPoly& a, const QPoly& b) {
    QPoly out(a.size() + b.size() - 1, Quad(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };

  QPoly p_prev{Quad(0)}, p{Quad(1)}, q_prev{Quad(0)}, q{Quad(0)};
  for (int k = 0; k <= n; ++k) {
    const auto& r = table[static_cast<std::size_t>(k)];
    const double t_prev = k > 0 ? table[static_cast<std::size_t>(k - 1)].t : 0.0;
    QPoly p_next = combine(p, p_prev, r, t_prev);
    QPoly q_next = k == 0 ? QPoly{Quad(1) / Quad(r.t)} : combine(q, q_prev, r, t_prev);
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
  // p, q hold index n + 1; p_prev, q_prev hold index n.
  QPoly lhs = multiply(q, p_prev);
  const QPoly rhs = multiply(p, q_prev);
  lhs.resize(std::max(lhs.size(), rhs.size()), Quad(0));
  for (std::size_t i = 0; i < rhs.size(); ++i) lhs[i] -= rhs[i];
  std::vector<double> coeffs;
  for (const auto& c : lhs) coeffs.push_back(static_cast<double>(c));
  return Polynomial(std::move(coeffs));
}

}  // namespace secmeas
