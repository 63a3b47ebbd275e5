#include "doctest.h"
#include "spacing/fredholm.hpp"
#include "spacing/painleve_v.hpp"
#include "spacing/series.hpp"
#include "support.hpp"

#include <cmath>

using namespace spacing;
using spacing::test::error_of;
using spacing::test::kPi;

namespace {

const SeriesExpansion& series_of(TranscendentId id) {
  static std::map<TranscendentId, SeriesExpansion> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, extend_series(lookup(id))).first;
  return it->second;
}

}  // namespace

TEST_CASE("leading terms of the boundary expansions as printed") {
  // sigma ~ -s/pi - (s/pi)^2
  CHECK(series_of(TranscendentId::kSigmaPV).coefficient(2) == PiRational(-1, 1, -1));
  CHECK(series_of(TranscendentId::kSigmaPV).coefficient(4) == PiRational(-1, 1, -2));
  // sigma_B ~ s^{1/2}/pi + 2s/pi^2
  CHECK(series_of(TranscendentId::kSigmaB).coefficient(1) == PiRational(1, 1, -1));
  CHECK(series_of(TranscendentId::kSigmaB).coefficient(2) == PiRational(2, 1, -2));
  // tilde sigma ~ -s^3/(3 pi)
  CHECK(series_of(TranscendentId::kTildeSigma).terms.front().tau_exponent == 6);
  CHECK(series_of(TranscendentId::kTildeSigma).coefficient(6) == PiRational(-1, 3, -1));
  // tilde sigma_B ~ s/3 - s^2/45 + 8 s^{5/2}/(135 pi)
  const auto& tb = series_of(TranscendentId::kTildeSigmaB);
  CHECK(tb.coefficient(2) == PiRational(1, 3));
  CHECK(tb.coefficient(3).is_zero());
  CHECK(tb.coefficient(4) == PiRational(-1, 45));
  CHECK(tb.coefficient(5) == PiRational(8, 135, -1));
  // sigma_B+ ~ s^{3/2}/(3 pi)(1 + O(s)) + (2/3)(1/(3 pi))^2 s^3 (1 + O(s))
  const auto& bp = series_of(TranscendentId::kSigmaBPlus);
  CHECK(bp.coefficient(3) == PiRational(1, 3, -1));
  CHECK(bp.coefficient(6) == PiRational(2, 27, -2));
  // tilde sigma_B+ ~ s/5 (1 + O(s)) + 8 s^{7/2}/(3^3 5^3 7 pi)
  const auto& tbp = series_of(TranscendentId::kTildeSigmaBPlus);
  CHECK(tbp.coefficient(2) == PiRational(1, 5));
  CHECK(tbp.coefficient(7) == PiRational(8, 27 * 125 * 7, -1));
}

TEST_CASE("every extended series satisfies its equation beyond the fixed order") {
  for (TranscendentId id : kAllTranscendents) {
    const SeriesConsistency c = series_self_consistency(lookup(id), series_of(id));
    CAPTURE(name(id));
    CHECK(c.passed);
    CHECK(c.residual_order > c.order);
    CHECK(c.ratio_at_smallest < 1e-6L);
  }
}

TEST_CASE("exactly one reading of the tilde sigma_B+ equation admits its expansion") {
  const auto verdicts = resolve_tilde_b_plus_reading();
  REQUIRE(verdicts.size() == 2);
  CHECK(verdicts[0].reading == TildeBPlusReading::kPrimed);
  CHECK(verdicts[0].admits_seed);
  CHECK(verdicts[1].reading == TildeBPlusReading::kAsPrinted);
  CHECK_FALSE(verdicts[1].admits_seed);
  CHECK(verdicts[1].detail.find("InconsistentSeed") != std::string::npos);
}

TEST_CASE("the integral term reproduces the Fredholm determinant at small s") {
  // E_2 = exp(int_0^{pi s} sigma/t dt); the truncated series alone must match
  // an independent determinant evaluation inside its trust radius.
  const auto& sp = series_of(TranscendentId::kSigmaPV);
  for (long double s : {0.001L, 0.003L, 0.006L}) {
    REQUIRE(kPi * s < sp.trust_radius);
    const long double e2 = std::exp(series_integral_term(sp, kPi * s));
    CHECK(std::fabs(e2 - sine_kernel_det(s, 40)) < 1e-15L);
  }
}

TEST_CASE("evaluation outside the trust radius is refused") {
  const auto& sp = series_of(TranscendentId::kSigmaPV);
  CHECK(error_of([&] { eval_series(sp, 2 * sp.trust_radius); }) == ErrorCode::kOutOfTrustRadius);
  CHECK(error_of([&] { series_integral_term(sp, -1); }) == ErrorCode::kOutOfTrustRadius);
  CHECK_NOTHROW(eval_series_unchecked(sp, 2 * sp.trust_radius));
}

TEST_CASE("series derivatives are consistent") {
  for (TranscendentId id : kAllTranscendents) {
    const auto& sp = series_of(id);
    const long double s = sp.trust_radius / 2, h = s * 1e-4L;
    const SeriesValue v = eval_series(sp, s);
    const long double d1 =
        (eval_series(sp, s + h).value - eval_series(sp, s - h).value) / (2 * h);
    CAPTURE(name(id));
    CHECK(std::fabs(d1 - v.first) <= 1e-7L * (std::fabs(v.first) + 1e-3L));
  }
}

TEST_CASE("tilde series follow from their bases exactly") {
  const std::pair<TranscendentId, TranscendentId> pairs[] = {
      {TranscendentId::kSigmaPV, TranscendentId::kTildeSigma},
      {TranscendentId::kSigmaB, TranscendentId::kTildeSigmaB},
      {TranscendentId::kSigmaBPlus, TranscendentId::kTildeSigmaBPlus}};
  for (const auto& [base, tilde] : pairs) {
    const ExactSeries from_base =
        tilde_series_from_base(lookup(base), to_exact_series(series_of(base), series_of(base).order_tau));
    const ExactSeries direct = to_exact_series(series_of(tilde));
    const int upto = std::min(from_base.cap(), series_of(tilde).order_tau);
    CAPTURE(name(tilde));
    for (int k = 0; k <= upto; ++k) CHECK(from_base.coefficient(k) == direct.coefficient(k));
  }
}
