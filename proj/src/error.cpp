#include "spacing/error.hpp"

namespace spacing {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonUniqueCoefficient: return "NonUniqueCoefficient";
    case ErrorCode::kInconsistentSeed: return "InconsistentSeed";
    case ErrorCode::kOutOfTrustRadius: return "OutOfTrustRadius";
    case ErrorCode::kBranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::kStiffnessFailure: return "StiffnessFailure";
    case ErrorCode::kDegenerateU: return "DegenerateU";
    case ErrorCode::kRangeExceeded: return "RangeExceeded";
    case ErrorCode::kNegativeIntegrand: return "NegativeIntegrand";
    case ErrorCode::kEigensolverNoConvergence: return "EigensolverNoConvergence";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kInsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

}  // namespace spacing
