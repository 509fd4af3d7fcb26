#pragma once

#include <stdexcept>
#include <string>

namespace ehz {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  DimensionMismatch,
  NotSymplectic,
  NotOrthogonal,
  SingularMatrix,
  NoZeroFound,
  OriginNotInterior,
  NoFixedInteriorPoint,
  NonConvergence,
  CarrierResidualTooLarge,
  ZeroDenominator,
  AssumptionViolated,
  ClassificationAmbiguous,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoZeroFound: return "NoZeroFound";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::NoFixedInteriorPoint: return "NoFixedInteriorPoint";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::CarrierResidualTooLarge: return "CarrierResidualTooLarge";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::ClassificationAmbiguous: return "ClassificationAmbiguous";
  }
  return "Unknown";
}

/// Library-wide exception. The code names the precondition or numerical
/// failure; the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ehz
