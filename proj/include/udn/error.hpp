#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udn {

enum class ErrorCode {
  NonIncreasingBreakpoints,
  NegativeExponent,
  ExponentBelowDimension,
  InvalidArgument,
  OutOfDomain,
  NegativeArgument,
  NegativeRadius,
  QuadratureFailure,
  UnsupportedBranch,
  TooFewSamples,
  NegativeS,
  UnclassifiedInput,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIncreasingBreakpoints: return "NonIncreasingBreakpoints";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::ExponentBelowDimension: return "ExponentBelowDimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::UnsupportedBranch: return "UnsupportedBranch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NegativeS: return "NegativeS";
    case ErrorCode::UnclassifiedInput: return "UnclassifiedInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace udn
