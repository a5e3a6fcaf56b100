#pragma once

#include <memory>

#include "secmeas/measures.hpp"
#include "secmeas/orthosys.hpp"
#include "secmeas/quad.hpp"

namespace secmeas {

/// The sequence of normalized secondary measures rho_0 = rho, rho_1, ...
/// where rho_{n+1} is the secondary measure of rho_n divided by its mass.
///
/// Every level quantity is expressed through level-0 data (P, Q, phi, rho,
/// S_rho), never by iterating the one-step secondary-measure map:
///
///   rho_n(x) = rho / (t_{n-1}^2 [(P_{n-1} phi/2 - Q_{n-1})^2 + pi^2 rho^2 P_{n-1}^2])
///   S_n(z)   = (Q_n - P_n S_rho) / (t_{n-1} (Q_{n-1} - P_{n-1} S_rho))
///
/// The recurrence of rho_n is the base recurrence shifted by n, so c_1^n = s_n
/// and d_0^n = t_n^2.
///
/// Cheap to copy; copies share immutable state.
class SecondaryChain {
 public:
  /// `system_size` is the degree of the base orthonormal system kept in
  /// monomial form; 0 selects min(max_index, max(max_level + 8, 16)).
  SecondaryChain(MeasureFamily base, int max_level = 10, int system_size = 0);

  const MeasureFamily& base_family() const noexcept;
  const OrthoSystem& base() const noexcept;
  int max_level() const noexcept;

  /// (s_n, t_n): mean of rho_n and square root of its variance.
  RecurrenceCoeffs level_coeffs(int n) const;
  double level_mean(int n) const { return level_coeffs(n).s; }
  double level_variance(int n) const {
    const double t = level_coeffs(n).t;
    return t * t;
  }

  /// rho_n(x); zero outside the closed support.
  double density(int n, double x) const;
  /// phi_n(x), the boundary sum of S_n across the support.
  double reducer(int n, double x) const;
  /// S_n(z) for z off the support.
  Complex stieltjes(int n, Complex z) const;

  /// R_n(z) = P_n(z) S_rho(z) - Q_n(z) = \int P_n(t) rho(t) / (z - t) dt.
  /// Far from the support the closed-form difference cancels; once the
  /// cancellation factor |P_n S| / |R_n| exceeds 1e6 the exact rewrite
  ///   R_n(z) = z^{-n} \int P_n(t) t^n rho(t) / (z - t) dt
  /// is evaluated with the base Gauss rule instead.
  Complex remainder(int n, Complex z) const;

  /// P_{n-1}(x) phi(x)/2 - Q_{n-1}(x) and pi rho(x) P_{n-1}(x): real and
  /// (negated) imaginary part of R_{n-1}(x + i0).
  struct Bracket {
    double real;
    double imag;
    double norm2() const noexcept { return real * real + imag * imag; }
  };
  Bracket bracket(int index, double x) const;

  /// S_0(z) = 1 / (z - c_1^0 - d_0^0 / (z - c_1^1 - ... - d_0^depth S_{depth+1}(z))),
  /// evaluated bottom-up with S_{depth+1} from the closed form.
  Complex continued_fraction_eval(int depth, Complex z) const;

  /// The same value through the convergents u_n, v_n of the fraction:
  /// S_0 = (u_n (-d_0^n S_{n+1}) + u_{n+1}) / (v_n (-d_0^n S_{n+1}) + v_{n+1}).
  Complex convergent_form(int depth, Complex z) const;

  /// rho_n packaged as a MeasureFamily (density, reducer, transform and the
  /// shifted recurrence); level 0 returns the base family.
  MeasureFamily level_family(int n) const;

  /// Orthonormal system of rho_{k+1} from level-0 polynomials:
  ///   P_n^{k+1} = t_k (P_k Q_{n+k+1} - Q_k P_{n+k+1})
  ///   Q_n^{k+1} = P_{k+1} Q_{n+k+1} - P_{n+k+1} Q_{k+1}
  OrthoSystem associated_system(int k, int N) const;
  /// Same system through the product of transfer matrices
  ///   M_j(x) = (1/t_j) [[0, t_j^2], [-1, x - s_j]] applied to (P_{n+k+1}, Q_{n+k+1}).
  OrthoSystem associated_system_matrix(int k, int N) const;
  /// Same system generated directly from the shifted recurrence.
  OrthoSystem associated_system_shifted(int k, int N) const;
  /// Orthonormal system of rho_level (base system for level 0).
  OrthoSystem level_system(int level, int N) const;

  /// Gauss rule with m nodes for rho_n (shifted recurrence).
  QuadratureRule level_gauss_rule(int n, int m) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

struct PadeCheck {
  Complex lhs;  // (S_rho(z) - Q_{n+1}(z)/P_{n+1}(z)) z^{2n+3}
  double rhs;   // d_0^0 d_0^1 ... d_0^n
};

/// Asymptotic order of the [n/n+1] Pade approximant Q_{n+1}/P_{n+1}.
/// The difference S_rho - Q_{n+1}/P_{n+1} equals R_{n+1}(z)/P_{n+1}(z), which
/// is evaluated through SecondaryChain::remainder so that it stays accurate
/// at |z| = 1e4 where the naive subtraction has no correct digits.
PadeCheck pade_check(const SecondaryChain& chain, int n, Complex z);

}  // namespace secmeas
