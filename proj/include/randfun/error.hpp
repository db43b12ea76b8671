#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randfun {

enum class ErrorCode {
  InvalidArgument,
  NonEntireSequence,
  InvalidIndex,
  TooFewDominantTerms,
  TruncationFailure,
  OutOfCertifiedDisk,
  UnsupportedEnsemble,
  RoucheMarginUnverifiable,
  NumericalFailure,
  BoundaryRootUnresolved,
  ZeroAtOrigin,
  RareEventInfeasible,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonEntireSequence: return "NonEntireSequence";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::TooFewDominantTerms: return "TooFewDominantTerms";
    case ErrorCode::TruncationFailure: return "TruncationFailure";
    case ErrorCode::OutOfCertifiedDisk: return "OutOfCertifiedDisk";
    case ErrorCode::UnsupportedEnsemble: return "UnsupportedEnsemble";
    case ErrorCode::RoucheMarginUnverifiable: return "RoucheMarginUnverifiable";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::BoundaryRootUnresolved: return "BoundaryRootUnresolved";
    case ErrorCode::ZeroAtOrigin: return "ZeroAtOrigin";
    case ErrorCode::RareEventInfeasible: return "RareEventInfeasible";
  }
  return "Unknown";
}

// All library failures are reported through this exception type; `code()`
// identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace randfun
