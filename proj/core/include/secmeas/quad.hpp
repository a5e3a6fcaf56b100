#pragma once

#include <functional>
#include <span>
#include <vector>

#include "secmeas/types.hpp"

namespace secmeas {

enum class RuleKind { TanhSinh, GaussJacobiMatrix, MappedHalfLine, MappedRealLine };

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  RuleKind kind = RuleKind::GaussJacobiMatrix;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  /// false when the evaluation budget ran out before the tolerance was met;
  /// value and error_estimate then hold the best available numbers.
  bool converged = true;
};

struct IntegrationOptions {
  double tol = 1e-10;
  double tol_abs = 1e-14;
  long max_evaluations = 1L << 20;
  int min_level = 3;
  int max_level = 14;
};

/// Double-exponential quadrature over a compact interval, a half-line
/// (x = a - ln u) or the real line (x = tan theta). The error estimate is the
/// difference between the last two levels of the step-halving ladder.
///
/// Nodes that round onto an endpoint are skipped, so integrands only need to
/// be finite on the open interior. A non-finite value at an interior node
/// raises NonFinite.
IntegrationResult integrate(const std::function<double(double)>& f, const Interval& support,
                            const IntegrationOptions& options);

IntegrationResult integrate(const std::function<double(double)>& f, const Interval& support, double tol);

/// Same ladder, applied to a complex-valued integrand.
Complex integrate_complex(const std::function<Complex(double)>& f, const Interval& support,
                          const IntegrationOptions& options);

/// Value of the tanh-sinh ladder truncated at a fixed level (no adaptivity).
double integrate_at_level(const std::function<double(double)>& f, const Interval& support, int level);

struct TridiagonalEigen {
  std::vector<double> values;          // ascending
  std::vector<double> first_components;  // first entry of each unit eigenvector
};

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit-shift QL
/// iterations, tracking only the first component of each eigenvector.
/// Throws EigenFailure after 50 * n sweeps without convergence.
TridiagonalEigen tridiagonal_eigen(std::span<const double> diagonal, std::span<const double> offdiagonal);

/// Gauss rule with m nodes for the probability measure whose three-term
/// recurrence begins with `recurrence` (Golub-Welsch).
QuadratureRule gauss_rule(std::span<const RecurrenceCoeffs> recurrence, int m);

struct TensorOptions {
  long max_points = 10'000'000;
  int max_dimension = 5;
  unsigned threads = 1;
};

/// Sum of kernel(t_0, ..., t_{d-1}) * w_0 ... w_{d-1} over the tensor grid.
/// Summation is pairwise along every axis and the per-thread work split is
/// along the first axis only, so the result does not depend on `threads`.
double tensor_integrate(const std::function<double(std::span<const double>)>& kernel,
                        std::span<const QuadratureRule> rules, const TensorOptions& options = {});

/// Builds one Gauss rule per dimension for tensor integration of divided
/// differences. Dimension i uses the recurrence recurrences[i] with at least
/// base_size + i nodes; when a node lies within the divided-difference
/// collision threshold of a node of an earlier dimension, the rule is grown
/// by one point (at most three times) before NodeCollision is raised.
std::vector<QuadratureRule> collision_free_rules(std::span<const RecurrenceTable> recurrences, int base_size);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace secmeas
