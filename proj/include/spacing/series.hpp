#ifndef SPACING_SERIES_HPP
#define SPACING_SERIES_HPP

#include "spacing/catalog.hpp"
#include "spacing/exact.hpp"

#include <string>
#include <vector>

namespace spacing {

struct SeriesTerm {
  int tau_exponent;  // the term is coefficient * s^{tau_exponent/2}
  PiRational exact;
  long double value;
};

/// Small-argument expansion of one transcendent in powers of s^{1/2}.
struct SeriesExpansion {
  TranscendentId id;
  std::vector<SeriesTerm> terms;  // increasing exponents, nonzero coefficients
  int order_tau = 0;              // terms through s^{order_tau/2} are exact
  long double trust_radius = 0;   // estimated truncation error < tolerance * |sigma| below this
  long double tolerance = 0;

  long double order() const { return order_tau / 2.0L; }
  /// Exact coefficient of s^{tau_exponent/2} (zero when absent).
  PiRational coefficient(int tau_exponent) const;
};

struct SeriesValue {
  long double value;
  long double first;
  long double second;
};

inline constexpr int kDefaultSeriesOrderTau = 12;  // through s^6
inline constexpr long double kDefaultSeriesTolerance = 1e-14L;

/// Extends the catalog seed order by order by substituting into the
/// equation with exact arithmetic. Every coefficient beyond the seed must be
/// forced by the equation; seed coefficients are checked wherever the
/// equation constrains them.
///   kNonUniqueCoefficient  an order leaves a coefficient free (or more than
///                          one consistent branch survives)
///   kInconsistentSeed      no choice of coefficients cancels some order
SeriesExpansion extend_series(const TranscendentSpec& spec,
                              int target_order_tau = kDefaultSeriesOrderTau,
                              long double tolerance = kDefaultSeriesTolerance);

/// Value and first two derivatives; kOutOfTrustRadius outside (0, trust_radius].
SeriesValue eval_series(const SeriesExpansion& series, long double s);
/// Same evaluation without the trust-radius contract.
SeriesValue eval_series_unchecked(const SeriesExpansion& series, long double s);

/// Closed-form int_0^x series(t)/t dt; kOutOfTrustRadius outside (0, trust_radius].
long double series_integral_term(const SeriesExpansion& series, long double x);
long double series_integral_term_unchecked(const SeriesExpansion& series, long double x);

/// The truncated series as an exact Laurent polynomial in tau.
ExactSeries to_exact_series(const SeriesExpansion& series, int cap = INT_MAX);

/// Exact residual polynomial of the truncated series, with terms kept
/// through tau^cap.
ExactSeries exact_residual(const TranscendentSpec& spec, const ExactSeries& sigma, int cap);

/// Lowest tau order at which a term beyond the truncation order would enter
/// the residual. Residual coefficients below it must vanish identically.
int residual_check_limit(const TranscendentSpec& spec, const SeriesExpansion& series);

struct SeriesConsistency {
  TranscendentId id;
  long double series_order;     // series exact through s^series_order
  /// Power of s the residual must beat. A truncation error enters the
  /// residual first at tau^residual_check_limit, so the equation is
  /// satisfied through s^((limit - 1)/2).
  long double order;
  long double residual_order;   // lowest power of s in the exact residual
  long double worst_s;          // grid point with the largest |R(s)| / s^order
  long double worst_ratio;
  long double ratio_at_smallest;
  /// residual_order > order, and |R(s)| / s^order shrinks towards the small end.
  bool passed;
};

/// Evaluates the exact residual polynomial of the truncated series in
/// 50-digit arithmetic on a logarithmic grid over [s_lo, s_hi].
SeriesConsistency series_self_consistency(const TranscendentSpec& spec,
                                          const SeriesExpansion& series, long double s_lo = 1e-8L,
                                          long double s_hi = 1e-2L, int points = 25);

struct ReadingVerdict {
  TildeBPlusReading reading;
  bool admits_seed;
  std::string detail;  // error text for a rejected reading
};

/// Tries both transcriptions of the tilde sigma_B+ equation against its
/// boundary expansion (which carries the 8 s^{7/2} / (3^3 5^3 7 pi) term).
std::vector<ReadingVerdict> resolve_tilde_b_plus_reading();

}  // namespace spacing

#endif  // SPACING_SERIES_HPP
