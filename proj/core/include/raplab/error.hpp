#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace raplab {

enum class ErrorCode {
  InvalidArgument,
  EmptyDomain,
  DimMismatch,
  WindowOutOfDomain,
  GridMismatch,
  WindowTooShort,
  DomainTooShort,
  HullNotAP,
  StepSizeUnderflow,
  NonFiniteRhs,
  BadOrder,
  LagOutOfRange,
  SampleBeforeDelay,
  NonFiniteValue,
  NonConvergence,
  BranchCollision,
  ParseError,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI's machine-readable failure report) can branch on kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace raplab
