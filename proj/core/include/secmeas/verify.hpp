#pragma once

#include <map>
#include <string>
#include <vector>

#include "secmeas/measures.hpp"
#include "secmeas/secondary_chain.hpp"

namespace secmeas {

inline constexpr int kReportSchemaVersion = 1;

/// Numeric check parameters (n, k, z_re, z_im, a, t, x, seed, tolerance, ...).
using CheckParams = std::map<std::string, double>;

struct CheckResult {
  std::string check_id;
  std::string family;
  CheckParams params;
  Complex expected;
  Complex actual;
  bool complex_valued = false;
  double rel_error = 0.0;
  double tolerance = 0.0;
  /// The error is |actual - expected| / max(1, |expected|) instead of relative.
  bool absolute = false;
  bool passed = false;
  std::string diagnostic;
};

struct CheckInfo {
  std::string id;
  std::string description;
  /// Parameters read by the check, with their defaults.
  CheckParams defaults;
};

/// Every registered check, sorted by id.
const std::vector<CheckInfo>& check_registry();
bool is_registered_check(const std::string& id);

struct IdentityCoverage {
  std::string identity;
  std::vector<std::string> check_ids;
};

/// Which checks exercise which closed-form identity.
const std::vector<IdentityCoverage>& identity_coverage();

/// Throws UnknownCheck for an unregistered id, and UnknownFamily or
/// ParseError-like errors while resolving the family name. Any failure inside
/// the computation is captured as a failed result with the error text in
/// `diagnostic`.
CheckResult run_check(const std::string& check_id, const std::string& family, const CheckParams& params = {});
CheckResult run_check(const std::string& check_id, const SecondaryChain& chain, const CheckParams& params = {});

/// Does the check make sense for this family (capabilities, support shape,
/// admissible shift)?
bool check_applies(const std::string& check_id, const MeasureFamily& family);

/// The parameter sets swept for one check and family when the suite runs to
/// max_n.
std::vector<CheckParams> suite_params(const std::string& check_id, const MeasureFamily& family, int max_n);

struct SuiteOptions {
  int max_n = 4;
  /// Restrict to these ids; empty runs the whole registry.
  std::vector<std::string> checks;
  int threads = 1;
};

/// Cartesian sweep over families, applicable checks and their parameter sets,
/// sorted by (check_id, family, params).
std::vector<CheckResult> run_suite(const std::vector<MeasureFamily>& families, const SuiteOptions& options);

struct SuiteSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
};

SuiteSummary summarize(const std::vector<CheckResult>& results);

/// One JSON object per line; numbers in shortest round-trip form.
std::string to_json_line(const CheckResult& result);
std::string to_json_line(const SuiteSummary& summary);

}  // namespace secmeas
