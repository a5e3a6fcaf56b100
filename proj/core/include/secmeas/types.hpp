#pragma once

#include <complex>
#include <limits>
#include <string_view>
#include <vector>

namespace secmeas {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SupportKind { Compact, HalfLine, RealLine };

/// Support of a measure. Endpoints are extended reals: a half-line is
/// [lower, +inf), the real line is (-inf, +inf).
struct Interval {
  SupportKind kind = SupportKind::Compact;
  double lower = 0.0;
  double upper = 1.0;

  static Interval compact(double a, double b) { return {SupportKind::Compact, a, b}; }
  static Interval half_line(double a) { return {SupportKind::HalfLine, a, kInf}; }
  static Interval real_line() { return {SupportKind::RealLine, -kInf, kInf}; }

  bool bounded() const noexcept { return kind == SupportKind::Compact; }
  bool interior(double x) const noexcept { return x > lower && x < upper; }
  bool contains(double x) const noexcept { return x >= lower && x <= upper; }

  /// Euclidean distance from a complex point to the (closed) support.
  double distance(Complex z) const noexcept;
};

std::string_view to_string(SupportKind kind) noexcept;

/// One row of the three-term recurrence
///   x P_n(x) = t_n P_{n+1}(x) + s_n P_n(x) + t_{n-1} P_{n-1}(x).
struct RecurrenceCoeffs {
  double s = 0.0;
  double t = 0.0;
};

using RecurrenceTable = std::vector<RecurrenceCoeffs>;

}  // namespace secmeas
