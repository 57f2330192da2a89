#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chopt {

enum class ErrorCode {
  NonPositiveRatio,
  DegenerateState,
  InvalidExponents,
  InvalidEfficiency,
  InvalidArgument,
  NonFiniteObjective,
  NoViolationFound,
  ComplexRootRegime,
  SingularEfficiency,
  NoPhysicalRoot,
  ConsistencyFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveRatio: return "NonPositiveRatio";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::InvalidEfficiency: return "InvalidEfficiency";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::NoViolationFound: return "NoViolationFound";
    case ErrorCode::ComplexRootRegime: return "ComplexRootRegime";
    case ErrorCode::SingularEfficiency: return "SingularEfficiency";
    case ErrorCode::NoPhysicalRoot: return "NoPhysicalRoot";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chopt
