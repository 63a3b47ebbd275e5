#ifndef SPACING_ODE_HPP
#define SPACING_ODE_HPP

#include "spacing/catalog.hpp"
#include "spacing/series.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace spacing {

/// How sigma'' is obtained during integration.
///   kThirdOrder  differentiate the equation once; the common factor sigma''
///                cancels, leaving a polynomial third-order equation that
///                passes through zeros of sigma'' with no branch choice.
///   kSquareRoot  sigma'' = branch * sqrt(F)/s with the branch held fixed
///                from the series; fails with kBranchAmbiguity when F < 0.
enum class IntegrationForm { kThirdOrder, kSquareRoot };

struct IntegrationOptions {
  /// Target relative accuracy of the delivered trajectory (sigma and the
  /// running integral), not the per-step tolerance. See integrate().
  long double rel_tol = 1e-12L;
  long double abs_tol = 1e-40L;
  IntegrationForm form = IntegrationForm::kThirdOrder;
  std::size_t max_steps = 2000000;
};

struct TrajectoryNode {
  long double s;
  long double sigma;
  long double first;
  long double second;
  long double integral;  // int_0^s sigma(t)/t dt
};

struct BranchFlip {
  long double s;        // location of the sign change of sigma'' (linear estimate)
  long double forcing;  // F / residual scale at the closest node
  long double step;     // width of the step that contained it
};

struct DenseValue {
  long double sigma;
  long double first;
  long double second;
  long double integral;
};

struct IntegrationDiagnostics {
  long double seed_point = 0;         // where the integrator took over from the series
  long double amplification = 1;      // measured growth of local errors over the range
  long double local_tolerance = 0;    // per-step tolerance actually used
  long double estimated_error = 0;    // amplification * local_tolerance
  long double max_relative_residual = 0;
  long double max_residual_at = 0;    // argument where it occurs
  std::size_t steps = 0;
};

/// Dense record of one transcendent on (0, end]. Up to the seed point values
/// come from the series; beyond it from the integrated nodes, with
/// in-between points reached by a single Runge-Kutta step from the
/// preceding node.
class SolutionTrajectory {
 public:
  SolutionTrajectory(TranscendentSpec spec, SeriesExpansion series, IntegrationOptions options,
                     std::vector<TrajectoryNode> nodes, std::vector<BranchFlip> flips,
                     IntegrationDiagnostics diagnostics);

  TranscendentId id() const { return spec_.id; }
  const TranscendentSpec& spec() const { return spec_; }
  const SeriesExpansion& series() const { return series_; }
  const std::vector<TrajectoryNode>& nodes() const { return nodes_; }
  const std::vector<BranchFlip>& branch_flips() const { return flips_; }
  const IntegrationDiagnostics& diagnostics() const { return diagnostics_; }
  std::pair<long double, long double> tolerance_profile() const {
    return {options_.rel_tol, options_.abs_tol};
  }
  long double start() const { return nodes_.front().s; }
  long double end() const { return nodes_.back().s; }

  /// kRangeExceeded for s < 0 or s beyond end().
  DenseValue at(long double s) const;
  long double integral(long double s) const { return at(s).integral; }

  /// Largest |residual| / residual scale over the nodes, evaluated in the
  /// working precision of the integrator.
  long double max_relative_residual() const { return diagnostics_.max_relative_residual; }

 private:
  TranscendentSpec spec_;
  SeriesExpansion series_;
  IntegrationOptions options_;
  std::vector<TrajectoryNode> nodes_;
  std::vector<BranchFlip> flips_;
  IntegrationDiagnostics diagnostics_;
};

/// Integrates outward from a series-seeded point to s_end (in the
/// transcendent's own argument) in 113-bit floating point with an embedded
/// Runge-Kutta 7(8) pair.
///
/// The physical solutions are unstable in the forward direction: nearby
/// solutions separate roughly like exp(t) (sigma family) or exp(2 sqrt(x))
/// (Bessel family). Two pilot passes at fixed tight tolerances measure that
/// amplification over [seed, s_end]; the final pass then runs with local
/// tolerance rel_tol / amplification so the delivered error tracks rel_tol.
/// The local tolerance is floored at kLocalToleranceFloor, in which case
/// diagnostics().estimated_error exceeds rel_tol.
///
/// Errors: kInvalidArgument (s_end inside the series trust radius, rel_tol
/// outside [1e-13, 1e-6]), kBranchAmbiguity, kStiffnessFailure,
/// kInconsistentSeed (series and integrator disagree at the trust radius by more
/// than max(1e-12, rel_tol)).
SolutionTrajectory integrate(const TranscendentSpec& spec, const SeriesExpansion& series,
                             long double s_end, const IntegrationOptions& options = {});

inline constexpr long double kManifoldTolerance = 1e-10L;
inline constexpr long double kLocalToleranceFloor = 1e-31L;
inline constexpr long double kMinRelTol = 1e-13L;
inline constexpr long double kMaxRelTol = 1e-6L;

/// branch * sqrt(max(F, 0)) / s. A slightly negative F (relative to the
/// residual scale) is clamped; anything below -eps_manifold is kBranchAmbiguity.
long double sigma_dd(const TranscendentSpec& spec, long double s, long double sigma,
                     long double first, int branch,
                     long double eps_manifold = kManifoldTolerance);

}  // namespace spacing

#endif  // SPACING_ODE_HPP
