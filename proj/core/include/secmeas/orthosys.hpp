#pragma once

#include <span>
#include <vector>

#include "secmeas/measures.hpp"
#include "secmeas/poly.hpp"

namespace secmeas {

/// Orthonormal polynomials P_0..P_N of a family together with their
/// secondary polynomials Q_n(x) = \int (P_n(t) - P_n(x)) / (t - x) rho(t) dt
/// and the leading coefficients a_n of P_n.
struct OrthoSystem {
  MeasureFamily family;
  std::vector<Polynomial> P;
  std::vector<Polynomial> Q;
  std::vector<double> a;

  int size() const noexcept { return static_cast<int>(P.size()) - 1; }
};

/// Builds P and Q with the three-term recurrence,
///   P_{n+1} = ((x - s_n) P_n - t_{n-1} P_{n-1}) / t_n,
/// from P_0 = 1, P_1 = (x - s_0)/t_0 and Q_0 = 0, Q_1 = 1/t_0.
OrthoSystem generate(const MeasureFamily& family, int N);

/// Same recurrence over an explicit table (rows 0..N-1 are used).
OrthoSystem generate(const MeasureFamily& family, std::span<const RecurrenceCoeffs> recurrence, int N);

/// T(f)(x) = \int (f(t) - f(x)) / (t - x) rho(t) dt for polynomial f, given
/// the moments m_k of rho for k < deg f. The quotient is expanded in powers
/// of t with coefficients polynomial in x and integrated termwise:
///   [x^i] T(f) = sum_j f_j m_{j-1-i}.
Polynomial apply_T(const Polynomial& f, std::span<const double> moments);

/// apply_T with the moments of sys.family.
Polynomial apply_T_poly(const OrthoSystem& sys, const Polynomial& f);

/// <P_n, P_m> under the family density by double-exponential quadrature.
double orthonormality_check(const OrthoSystem& sys, int n, int m);

/// Q_{n+1} P_n - P_{n+1} Q_n, which equals the constant 1/t_n.
Polynomial wronskian(const OrthoSystem& sys, int n);

/// The same polynomial with P and Q rebuilt from the recurrence in 113-bit
/// binary floating point and the product formed there before rounding. The
/// monomial coefficients of P_n Q_{n+1} grow fast enough (about 1e16 at
/// n = 10 on [0, 1]) that the double-precision difference loses the constant.
Polynomial wronskian_extended(const MeasureFamily& family, int n);

}  // namespace secmeas
