#pragma once

#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "secmeas/types.hpp"

namespace secmeas {

inline constexpr int kDefaultMaxRecurrence = 32;

/// Everything needed to build a MeasureFamily. Only `name`, `support` and
/// `recurrence` are mandatory; missing closures make the matching
/// evaluations fail with CapabilityMissing.
struct FamilyDefinition {
  std::string name;
  Interval support;
  std::function<RecurrenceCoeffs(int)> recurrence;
  int max_index = kDefaultMaxRecurrence;
  std::function<double(double)> density;
  std::function<double(double)> reducer;
  std::function<Complex(Complex)> stieltjes;
};

/// A probability measure given by its density, its reducer
///   phi(x) = lim_{eps -> 0+} S(x - i eps) + S(x + i eps),
/// its Stieltjes transform S(z) = \int rho(t) dt / (z - t), and the
/// coefficients of the three-term recurrence of its orthonormal polynomials.
///
/// Immutable; copies share the underlying closures.
class MeasureFamily {
 public:
  explicit MeasureFamily(FamilyDefinition def);

  const std::string& name() const noexcept { return def_.name; }
  const Interval& support() const noexcept { return def_.support; }
  int max_index() const noexcept { return def_.max_index; }

  bool has_density() const noexcept { return static_cast<bool>(def_.density); }
  bool has_reducer() const noexcept { return static_cast<bool>(def_.reducer); }
  bool has_stieltjes() const noexcept { return static_cast<bool>(def_.stieltjes); }

  /// (s_n, t_n); IndexOutOfRange beyond max_index().
  RecurrenceCoeffs recurrence(int n) const;
  /// Rows offset .. offset + count - 1.
  RecurrenceTable recurrence_table(int count, int offset = 0) const;

  /// Density on the support, zero outside.
  double density(double x) const;
  /// Closed-form reducer; OutOfDomain off the open support.
  double reducer(double x) const;
  /// Closed-form transform; OnSupport within 1e-12 of the support.
  Complex stieltjes(Complex z) const;

 private:
  FamilyDefinition def_;
};

std::vector<std::string> builtin_family_names();

/// One of lebesgue01, exponential, gaussian, chebyshev2, chebyshev2_01.
/// Construction-time invariants are verified (see verify_family_invariants).
/// Throws UnknownFamily.
MeasureFamily get_family(const std::string& name, int max_index = kDefaultMaxRecurrence);

/// Checks t_n > 0 for n <= max_index and, where the closures exist, that the
/// density integrates to one, that S(conj z) = conj S(z), and that z S(z) -> 1
/// far from the support. Throws InvalidArgument describing the first failure.
void verify_family_invariants(const MeasureFamily& family);

/// Parses the key-value custom family format:
///
///     # comment
///     name = my_measure
///     support = compact 0 1        (or: halfline 0, realline)
///     recurrence
///     0.5 0.2886751345948129
///     0.5 0.2581988897471611
///
/// Each row after `recurrence` holds s_n and t_n. Throws ParseError.
MeasureFamily parse_custom_family(std::istream& in);
MeasureFamily load_custom_family(const std::string& path);

/// Built-in families plus any custom definitions registered at runtime.
class FamilyCatalog {
 public:
  FamilyCatalog() = default;

  void add(MeasureFamily family);
  /// Custom names never shadow built-ins, so lookup order is irrelevant.
  MeasureFamily get(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, MeasureFamily> custom_;
};

/// Moments \int x^k rho for k = 0 .. count - 1, read off the Jacobi matrix as
/// e_0^T J^k e_0. Requires at least count / 2 + 1 recurrence rows.
std::vector<double> jacobi_moments(std::span<const RecurrenceCoeffs> recurrence, int count);

/// \int x^k rho(x) dx from the recurrence (exact up to rounding).
double moment(const MeasureFamily& family, int k);

/// Variance c_2 - c_1^2 of the measure, the mass of its secondary measure.
double d0(const MeasureFamily& family);

double eval_reducer(const MeasureFamily& family, double x);
Complex eval_stieltjes(const MeasureFamily& family, Complex z);

}  // namespace secmeas
