#include "secmeas/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secmeas/error.hpp"

namespace secmeas {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { normalize(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int degree, double c) {
  std::vector<double> v(static_cast<std::size_t>(degree) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

double Polynomial::operator[](int k) const noexcept {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double x) const noexcept { return eval(*this, x); }

Complex Polynomial::operator()(Complex z) const noexcept { return eval(*this, z); }

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  for (double& a : coeffs_) a *= c;
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<double> out(p.coeffs_.size() + q.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
  return Polynomial(std::move(out));
}

double eval(const Polynomial& p, double x) noexcept {
  const auto& c = p.coeffs();
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex eval(const Polynomial& p, Complex z) noexcept {
  const auto& c = p.coeffs();
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial shift_up(const Polynomial& p) {
  if (p.is_zero()) return {};
  std::vector<double> v(p.coeffs().size() + 1, 0.0);
  std::copy(p.coeffs().begin(), p.coeffs().end(), v.begin() + 1);
  return Polynomial(std::move(v));
}

Polynomial newton_quotient(const Polynomial& p, double x0) {
  if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "newton_quotient of the zero polynomial");
  const auto& c = p.coeffs();
  const std::size_t n = c.size();
  if (n == 1) return {};
  // Synthetic division by (t - x0); the remainder is p(x0) and is discarded.
  std::vector<double> q(n - 1, 0.0);
  double acc = c[n - 1];
  q[n - 2] = acc;
  for (std::size_t k = n - 2; k >= 1; --k) {
    acc = c[k] + x0 * acc;
    q[k - 1] = acc;
  }
  return Polynomial(std::move(q));
}

double collision_threshold(std::span<const double> nodes) noexcept {
  double m = 0.0;
  for (double t : nodes) m = std::max(m, std::abs(t));
  return 1e-9 * (1.0 + m);
}

void check_node_separation(std::span<const double> nodes) {
  const double delta = collision_threshold(nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (std::abs(nodes[i] - nodes[j]) <= delta) {
        std::ostringstream msg;
        msg << "nodes " << i << " and " << j << " are within " << delta << " (" << nodes[i] << ", "
            << nodes[j] << ")";
        throw Error(ErrorKind::NodeCollision, msg.str());
      }
}

double divided_difference(const std::function<double(double)>& f, std::span<const double> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "divided difference needs at least one node");
  check_node_separation(nodes);
  std::vector<double> table(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) table[i] = f(nodes[i]);
  // In-place triangular table; after pass k, table[i] = f[t_{i-k}, ..., t_i].
  for (std::size_t k = 1; k < nodes.size(); ++k)
    for (std::size_t i = nodes.size() - 1; i >= k; --i)
      table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - k]);
  return table.back();
}

double divided_difference(const Polynomial& p, std::span<const double> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "divided difference needs at least one node");
  check_node_separation(nodes);
  Polynomial q = p;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    if (q.is_zero()) return 0.0;
    q = newton_quotient(q, nodes[k]);
  }
  return eval(q, nodes.back());
}

double coefficient_distance(const Polynomial& p, const Polynomial& q) noexcept {
  const int n = std::max(p.degree(), q.degree());
  double scale = 0.0, diff = 0.0;
  for (int k = 0; k <= n; ++k) {
    scale = std::max({scale, std::abs(p[k]), std::abs(q[k])});
    diff = std::max(diff, std::abs(p[k] - q[k]));
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

}  // namespace secmeas
