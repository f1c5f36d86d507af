#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optomech {

enum class ErrorCode {
  InvalidElement,
  InvalidArgument,
  DegenerateDenominator,
  NoZeroDispersivePoint,
  SingularSystem,
  ZeroCoupling,
  NoRootInWindow,
  BranchAmbiguity,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NoZeroDispersivePoint: return "NoZeroDispersivePoint";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::NoRootInWindow: return "NoRootInWindow";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optomech
