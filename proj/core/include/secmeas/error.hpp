#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace secmeas {

enum class ErrorKind {
  InvalidArgument,
  UnknownFamily,
  CapabilityMissing,
  OnSupport,
  OutOfDomain,
  NodeCollision,
  NonFinite,
  EigenFailure,
  GridTooLarge,
  DegenerateDenominator,
  ZeroDivision,
  IndexOutOfRange,
  UnknownCheck,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so
/// callers (the verification harness, the CLI) can map it to a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace secmeas
