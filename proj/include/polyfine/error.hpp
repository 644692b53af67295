#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyfine {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidBody,
  kOutOfRange,
  kInvalidPosition,
  kRankDeficient,
  kSamplingFailure,
  kStandardizationFailed,
  kNotInsideBody,
  kInternal,
  kUnsupported,
  kBaselineFailed,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` is what
// callers branch on, `what()` carries the diagnostic text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidBody: return "invalid-body";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kInvalidPosition: return "invalid-position";
    case ErrorCode::kRankDeficient: return "rank-deficient";
    case ErrorCode::kSamplingFailure: return "sampling-failure";
    case ErrorCode::kStandardizationFailed: return "standardization-failed";
    case ErrorCode::kNotInsideBody: return "Y-not-inside-K";
    case ErrorCode::kInternal: return "internal-error";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kBaselineFailed: return "baseline-failed";
  }
  return "unknown";
}

}  // namespace polyfine
