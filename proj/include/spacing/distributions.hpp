#ifndef SPACING_DISTRIBUTIONS_HPP
#define SPACING_DISTRIBUTIONS_HPP

#include "spacing/ode.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace spacing {

struct ModelOptions {
  /// Largest spacing for beta = 1, 2. The Bessel-family transcendents are
  /// integrated to (pi s_max / 2)^2, so beta = 4 is covered up to s_max / 2.
  long double s_max = 8;
  IntegrationOptions integration{};
};

enum class Identity { kA1, kA2 };

struct IdentityCheck {
  long double lhs;
  long double rhs;
};

struct SpacingRow {
  long double s;
  long double E;
  long double p;
  long double surmise;
  long double deviation;  // p - surmise
};

struct TableMetadata {
  long double rel_tol = 0;
  long double abs_tol = 0;
  long double coverage = 0;
  bool tail_truncated = false;  // rows beyond coverage use p = 0, E = E(coverage)
  std::map<std::string, std::string> trajectory_hashes;
  std::string generated_at;  // ISO 8601, UTC
};

struct SpacingTable {
  int beta = 2;
  std::vector<SpacingRow> rows;
  TableMetadata metadata;
};

/// The six transcendents integrated once, with E_beta and p_beta assembled
/// from their running integrals. Read-only after construction.
class SpacingModel {
 public:
  /// Integrates all trajectories (in parallel). Rethrows the first failure.
  explicit SpacingModel(const ModelOptions& options = {});

  const ModelOptions& options() const { return options_; }
  const SolutionTrajectory& trajectory(TranscendentId id) const;

  /// Largest s at which every quantity for `beta` is available.
  long double coverage(int beta) const;

  /// E_beta(0; s). kRangeExceeded beyond coverage, kInvalidArgument for a bad beta.
  long double gap_probability(int beta, long double s) const;
  /// dE_beta/ds in closed form from the tilde transcendents.
  long double gap_derivative(int beta, long double s) const;
  /// 1 - E'(s): distribution function of the spacing.
  long double spacing_cdf(int beta, long double s) const { return 1 + gap_derivative(beta, s); }
  /// p_beta(s); 0 at s = 0.
  long double spacing_density(int beta, long double s) const;

  /// E_1 from sigma alone:
  ///   sqrt(E_2) exp(-1/2 int_0^{pi s} sqrt(-d/dx (sigma/x)) dx).
  /// kNegativeIntegrand if -d/dx(sigma/x) < 0 somewhere on the path.
  long double e1_from_e2_crosscheck(long double s) const;
  /// (E_1(s) + E_2(s)/E_1(s)) / 2, to be compared with E_4(s/2).
  long double e4_from_e1_e2_crosscheck(long double s) const;
  /// lhs: fourth-order centred difference (h = 1e-4) of E_2 (a1) or E_1 (a2);
  /// rhs: minus the exponential of the tilde integral.
  IdentityCheck derivative_identity_check(Identity which, long double s) const;

  /// Rows s = 0, step, 2 step, ... up to s_max (inclusive within step/2).
  /// Rows beyond coverage follow the tail policy and set tail_truncated.
  SpacingTable tabulate(int beta, long double s_max, long double step) const;

  /// FNV-1a of the node values, hex.
  std::string trajectory_hash(TranscendentId id) const;

 private:
  struct Channel {
    long double integral;  // signed exponent
    long double value;     // transcendent at the mapped argument
  };
  Channel channel(TranscendentId id, long double s) const;
  void check_range(int beta, long double s) const;

  ModelOptions options_;
  std::array<std::unique_ptr<SolutionTrajectory>, 6> trajectories_;
};

/// p_1^W(s) = (pi s / 2) exp(-pi s^2 / 4).
long double wigner_surmise(long double s);
/// Wigner surmise of the matching symmetry class (unit mean, unit mass).
long double wigner_surmise(int beta, long double s);

enum class DeviationMetric { kMaxAbs, kMaxRelAtPeak };

/// Deviation statistic between p_1 and the surmise on [0, 6] with grid step
/// `step`. kMaxAbs: max |p_1 - p_1^W|. kMaxRelAtPeak: |p_1 - p_1^W| / p_1 at
/// the maximum of p_1. Also reports where the statistic is attained.
struct DeviationResult {
  long double value;
  long double at;
};
DeviationResult surmise_deviation(const SpacingModel& model, DeviationMetric metric,
                                  long double step = 1e-3L);
/// Deviation between two arbitrary densities on a grid over [0, s_end].
template <class P, class Q>
DeviationResult surmise_deviation(P&& p, Q&& q, DeviationMetric metric, long double s_end,
                                  long double step);

/// Composite Simpson over the rows (uniform grid, even number of panels
/// taken from the front; a trailing odd panel uses the trapezoid rule).
long double integrate_rows(const std::vector<SpacingRow>& rows, bool first_moment);

std::string to_csv(const SpacingTable& table);
std::string to_json(const SpacingTable& table);

/// Shortest decimal with 17 significant digits.
std::string format_number(long double v);

template <class P, class Q>
DeviationResult surmise_deviation(P&& p, Q&& q, DeviationMetric metric, long double s_end,
                                  long double step) {
  DeviationResult best{0, 0};
  long double peak = -1, peak_s = 0, peak_dev = 0;
  const long n = static_cast<long>(s_end / step + 0.5L);
  for (long i = 0; i <= n; ++i) {
    const long double s = i * step;
    const long double a = p(s), b = q(s);
    const long double d = a > b ? a - b : b - a;
    if (d > best.value) best = {d, s};
    if (a > peak) {
      peak = a;
      peak_s = s;
      peak_dev = d;
    }
  }
  if (metric == DeviationMetric::kMaxAbs) return best;
  return {peak > 0 ? peak_dev / peak : 0, peak_s};
}

}  // namespace spacing

#endif  // SPACING_DISTRIBUTIONS_HPP
