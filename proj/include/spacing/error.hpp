#ifndef SPACING_ERROR_HPP
#define SPACING_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace spacing {

enum class ErrorCode {
  kInvalidArgument,
  kNonUniqueCoefficient,
  kInconsistentSeed,
  kOutOfTrustRadius,
  kBranchAmbiguity,
  kStiffnessFailure,
  kDegenerateU,
  kRangeExceeded,
  kNegativeIntegrand,
  kEigensolverNoConvergence,
  kWindowTooSmall,
  kInsufficientData,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spacing

#endif  // SPACING_ERROR_HPP
