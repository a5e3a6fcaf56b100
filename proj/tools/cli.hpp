#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace secmeas::cli {

inline constexpr int kCliSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kComputeError = 3,
};

/// Runs the command line `args` (without the program name). Tables go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Polynomial coefficients from "c0,c1,...", ascending powers.
std::vector<double> parse_coefficients(const std::string& text);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& text);

}  // namespace secmeas::cli
