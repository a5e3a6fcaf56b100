#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "secmeas/types.hpp"

namespace secmeas {

/// Dense real polynomial stored in ascending order: coeffs()[k] multiplies x^k.
///
/// The zero polynomial is the empty coefficient vector and has degree -1.
/// Only exact trailing zeros are stripped, so arithmetic never silently drops
/// a tiny but genuine leading coefficient.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c);
  static Polynomial monomial(int degree, double c = 1.0);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  /// Coefficient of x^k, zero beyond the degree.
  double operator[](int k) const noexcept;

  double operator()(double x) const noexcept;
  Complex operator()(Complex z) const noexcept;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(Polynomial p, double c) { return p *= c; }
  friend Polynomial operator*(double c, Polynomial p) { return p *= c; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize();
  std::vector<double> coeffs_;
};

/// Horner evaluation.
double eval(const Polynomial& p, double x) noexcept;
Complex eval(const Polynomial& p, Complex z) noexcept;

/// Multiplication by the monomial x.
Polynomial shift_up(const Polynomial& p);

/// The polynomial t -> (p(t) - p(x0)) / (t - x0), obtained by synthetic
/// division. Constants map to the zero polynomial; the zero polynomial is
/// rejected with InvalidArgument.
Polynomial newton_quotient(const Polynomial& p, double x0);

/// Minimum admissible node separation for divided differences:
/// 1e-9 * (1 + max |node|).
double collision_threshold(std::span<const double> nodes) noexcept;

/// Throws NodeCollision if two nodes are closer than collision_threshold().
void check_node_separation(std::span<const double> nodes);

/// Newton divided difference f[t_0, ..., t_n] by the triangular table.
double divided_difference(const std::function<double(double)>& f, std::span<const double> nodes);

/// Divided difference of a polynomial by repeated synthetic division:
/// p[t_0, ..., t_n] is the value at t_n of N_{t_{n-1}} ... N_{t_0} p. No
/// division by node gaps occurs, so this stays accurate for close nodes.
double divided_difference(const Polynomial& p, std::span<const double> nodes);

/// Largest coefficientwise difference max_k |p_k - q_k|, relative to the
/// largest coefficient magnitude of either operand (0 when both are zero).
double coefficient_distance(const Polynomial& p, const Polynomial& q) noexcept;

}  // namespace secmeas
