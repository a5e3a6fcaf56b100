#pragma once

#include <functional>
#include <optional>

#include "secmeas/orthosys.hpp"
#include "secmeas/quad.hpp"
#include "secmeas/secondary_chain.hpp"

namespace secmeas {

/// Largest n accepted by fourier_multiint (the grid has n + 1 dimensions).
inline constexpr int kMaxMultiintOrder = 3;

struct FourierReport {
  int n = 0;
  double direct = 0.0;
  std::optional<double> multiint;
  std::optional<double> product_form;
  /// |multiint(m) - multiint(m + 2)| for non-polynomial targets, the error
  /// proxy of the Gauss grid.
  std::optional<double> refinement_delta;
  /// |direct - multiint|, or |direct - product_form| when no multiple
  /// integral was computed; empty when neither exists.
  std::optional<double> discrepancy;
};

/// C_n(f) = <f, P_n> under the family density, by double-exponential
/// quadrature. A zero `tol` selects 1e-10 on compact supports, 1e-8 otherwise.
double fourier_direct(const OrthoSystem& sys, const std::function<double(double)>& f, int n, double tol = 0.0);

/// C_n(f) as (1/a_n) times the (n+1)-fold integral of the divided difference
/// f[t_0, ..., t_n] against rho_0(t_0) ... rho_n(t_n). Each axis uses a Gauss
/// rule of rho_k built from the shifted recurrence, sized m, m+1, ... and
/// grown where nodes of different axes would collide.
double fourier_multiint(const SecondaryChain& chain, const std::function<double(double)>& f, int n, int m,
                        const TensorOptions& options = {});

/// Polynomial overload: the kernel uses repeated synthetic division instead of
/// the triangular table, and the rule is exact once 2m - 1 >= deg f - n.
double fourier_multiint(const SecondaryChain& chain, const Polynomial& f, int n, int m,
                        const TensorOptions& options = {});

struct IdentityPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// <f,g>_n - <f,1>_n <g,1>_n against d_0^n <T_n f, T_n g>_{n+1}, where T_n is
/// the secondary-polynomial operator of rho_n (applied exactly through the
/// moments of rho_n) and both inner products come from quadrature of the
/// level densities.
IdentityPair isometry_check(const SecondaryChain& chain, const Polynomial& f, const Polynomial& g, int n);

/// F_{m-1} = T_{m-1} o ... o T_0 applied to a polynomial.
Polynomial composed_operator(const SecondaryChain& chain, const Polynomial& f, int m);

/// <f, P_m>_0 against d_0^0 ... d_0^{m-1} <F_{m-1}(f), F_{m-1}(P_m)>_m.
IdentityPair chain_reduction_check(const SecondaryChain& chain, const Polynomial& f, int m);

/// C_n(1/(x+a)) = -(1/a_n) prod_{k=0}^{n} S_k(-a). Throws OnSupport when -a
/// touches the support.
double eigen_product(const SecondaryChain& chain, double a, int n);

/// OnSupport unless -a lies off the closed support of the family.
void check_rational_shift(const MeasureFamily& family, double a);

/// T(f)(x) = \int (f(t) - f(x)) / (t - x) rho(t) dt by quadrature, split at x.
double apply_T_quadrature(const MeasureFamily& family, const std::function<double(double)>& f, double x);

struct GeneratingFunctionCheck {
  double partial_sum = 0.0;
  double closed_form = 0.0;
};

/// sum_{n=0}^{N} t^{n+1} P_n(x) for the chebyshev2_01 family against
/// t / ((t+1)^2 - 4 t x). Requires |t| < 1, x in (0, 1), N <= 40.
GeneratingFunctionCheck generating_function_check(double t, double x, int N);

/// The function whose Fourier coefficients are tabulated: a polynomial, or
/// the eigenfunction 1/(x + a) of every secondary-polynomial operator.
class FourierTarget {
 public:
  static FourierTarget polynomial(Polynomial p);
  static FourierTarget rational(double a);

  double operator()(double x) const;
  const Polynomial* as_polynomial() const noexcept { return poly_ ? &*poly_ : nullptr; }
  std::optional<double> rational_shift() const noexcept { return shift_; }

 private:
  std::optional<Polynomial> poly_;
  std::optional<double> shift_;
};

/// One row of the Fourier table: direct quadrature, the multiple integral
/// (n <= 3) and, for rational targets, the product of level transforms.
/// A rational target is checked against the support before anything runs.
/// `tol` is passed to fourier_direct.
FourierReport fourier_report(const SecondaryChain& chain, const FourierTarget& f, int n, int m, double tol = 0.0);

}  // namespace secmeas
