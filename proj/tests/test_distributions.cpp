#include "doctest.h"
#include "spacing/distributions.hpp"
#include "spacing/fredholm.hpp"
#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

using namespace spacing;
using spacing::test::error_of;
using spacing::test::kPi;
using spacing::test::shared_model;

namespace {

long double second_difference(int beta, long double s, long double h = 1e-3L) {
  const SpacingModel& m = shared_model();
  auto e = [&](long double t) { return m.gap_probability(beta, t); };
  return (-e(s + 2 * h) + 16 * e(s + h) - 30 * e(s) + 16 * e(s - h) - e(s - 2 * h)) /
         (12 * h * h);
}

long double log_slope(int beta) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 21;
  for (int k = 0; k < n; ++k) {
    const long double s = std::pow(10.0L, -3 + k / 20.0L);
    const long double x = std::log(s), y = std::log(shared_model().spacing_density(beta, s));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("empty interval and slope at zero") {
  for (int beta : {1, 2, 4}) {
    CHECK(shared_model().gap_probability(beta, 0) == 1);
    CHECK(shared_model().spacing_density(beta, 0) == 0);
  }
  CHECK(shared_model().gap_derivative(2, 0) == -1);
  const long double h = 1e-6L;
  CHECK(std::fabs((shared_model().gap_probability(2, h) - 1) / h + 1) < 1e-9L);
}

TEST_CASE("E_2 matches the sine-kernel determinant") {
  for (long double s : {0.1L, 1.0L, 2.5L, 5.0L}) {
    CHECK(std::fabs(shared_model().gap_probability(2, s) - sine_kernel_det(s, 80)) < 1e-10L);
  }
}

TEST_CASE("small-s behaviour") {
  const SpacingModel& m = shared_model();
  const long double s = 1e-3L;
  CHECK(std::fabs(m.spacing_density(2, s) / (kPi * kPi / 3 * s * s) - 1) < 1e-3L);
  CHECK(std::fabs(m.spacing_density(1, s) / (kPi * kPi / 6 * s) - 1) < 1e-3L);
  CHECK(m.spacing_density(4, 1e-2L) / m.spacing_density(1, 1e-2L) < 1e-4L);
  for (int beta : {1, 2, 4}) {
    CAPTURE(beta);
    CHECK(std::fabs(log_slope(beta) / beta - 1) < 0.02L);
  }
}

TEST_CASE("density is the second derivative of the gap probability") {
  for (int beta : {1, 2, 4}) {
    const long double hi = std::min(4.0L, shared_model().coverage(beta) - 0.01L);
    for (int i = 0; i < 25; ++i) {
      const long double s = 0.1L + (hi - 0.1L) * i / 24;
      CAPTURE(beta);
      CAPTURE(s);
      CHECK(std::fabs(second_difference(beta, s) - shared_model().spacing_density(beta, s)) <
            1e-6L);
    }
  }
}

TEST_CASE("identities at s = 1 and s = 3") {
  const SpacingModel& m = shared_model();
  for (long double s : {1.0L, 3.0L}) {
    const IdentityCheck a1 = m.derivative_identity_check(Identity::kA1, s);
    const IdentityCheck a2 = m.derivative_identity_check(Identity::kA2, s);
    CHECK(std::fabs(a1.lhs - a1.rhs) < 1e-8L);
    CHECK(std::fabs(a2.lhs - a2.rhs) < 1e-8L);
    CHECK(std::fabs(m.e1_from_e2_crosscheck(s) - m.gap_probability(1, s)) < 1e-6L);
  }
  CHECK(std::fabs(m.e4_from_e1_e2_crosscheck(2) - m.gap_probability(4, 1)) < 1e-8L);
  CHECK(std::fabs(m.e1_from_e2_crosscheck(1e-6L) - 1) < 1e-5L);
  CHECK(m.e4_from_e1_e2_crosscheck(0) == 1);
  CHECK(m.gap_derivative(1, 0) == -1);
  long double prev = 1;
  for (int i = 1; i <= 30; ++i) {
    const long double v = m.e4_from_e1_e2_crosscheck(0.25L * i);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("the sigma_B+ derivative relation") {
  // d/dx exp(-int_0^x sigma_B+/t) = -(x^{1/2}/(3 pi)) exp(-int_0^x tilde sigma_B+/t)
  const SolutionTrajectory& bp = shared_model().trajectory(TranscendentId::kSigmaBPlus);
  const SolutionTrajectory& tbp = shared_model().trajectory(TranscendentId::kTildeSigmaBPlus);
  for (long double x : {0.5L, 5.0L, 40.0L, 120.0L}) {
    const long double h = 1e-4L * x;
    auto f = [&](long double t) { return std::exp(-bp.integral(t)); };
    const long double lhs = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    const long double rhs = -std::sqrt(x) / (3 * kPi) * std::exp(-tbp.integral(x));
    CHECK(std::fabs(lhs - rhs) < 1e-10L * (1 + std::fabs(rhs)) );
  }
}

TEST_CASE("coverage and range errors") {
  const SpacingModel& m = shared_model();
  CHECK(m.coverage(1) == 8);
  CHECK(m.coverage(4) == 4);
  CHECK(error_of([&] { m.gap_probability(4, 4.5L); }) == ErrorCode::kRangeExceeded);
  CHECK(error_of([&] { m.spacing_density(2, 9); }) == ErrorCode::kRangeExceeded);
  CHECK(error_of([&] { m.gap_probability(3, 1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("Wigner surmise") {
  CHECK(wigner_surmise(0) == 0);
  // Stationary where pi s^2 / 4 = 1/2.
  const long double peak = std::sqrt(2 / kPi), h = 1e-5L;
  CHECK(std::fabs(wigner_surmise(peak + h) - wigner_surmise(peak - h)) < 1e-12L);
  CHECK(wigner_surmise(peak) > wigner_surmise(peak + 0.01L));
  using boost::math::quadrature::gauss_kronrod;
  for (int beta : {1, 2, 4}) {
    auto p = [beta](long double s) { return wigner_surmise(beta, s); };
    auto sp = [beta](long double s) { return s * wigner_surmise(beta, s); };
    CHECK(std::fabs(gauss_kronrod<long double, 61>::integrate(p, 0.0L, 20.0L) - 1) < 1e-14L);
    CHECK(std::fabs(gauss_kronrod<long double, 61>::integrate(sp, 0.0L, 20.0L) - 1) < 1e-14L);
  }
}

TEST_CASE("surmise deviation statistics") {
  auto same = [](long double s) { return wigner_surmise(s); };
  CHECK(surmise_deviation(same, same, DeviationMetric::kMaxAbs, 6, 0.01L).value == 0);
  const DeviationResult fine = surmise_deviation(shared_model(), DeviationMetric::kMaxAbs, 1e-3L);
  const DeviationResult coarse = surmise_deviation(shared_model(), DeviationMetric::kMaxAbs, 1e-2L);
  CHECK(std::fabs(fine.value - coarse.value) < 1e-4L);
  CHECK(fine.value >= 0.005L);
  CHECK(fine.value <= 0.03L);
}

TEST_CASE("tabulation contract and probability-law sanity") {
  const SpacingModel& m = shared_model();
  const SpacingTable t2 = m.tabulate(2, 5, 0.01L);
  REQUIRE(t2.rows.size() == 501);
  CHECK(t2.rows.front().s == 0);
  CHECK(t2.rows.back().s == doctest::Approx(5.0));
  for (std::size_t i = 1; i < t2.rows.size(); ++i) CHECK(t2.rows[i].E < t2.rows[i - 1].E);
  CHECK_FALSE(t2.metadata.tail_truncated);
  CHECK(t2.metadata.trajectory_hashes.size() == 6);

  for (int beta : {1, 2, 4}) {
    const long double cov = m.coverage(beta);
    const SpacingTable t = m.tabulate(beta, cov, 0.005L);
    for (const auto& r : t.rows) CHECK(r.p >= 0);
    // Tail beyond cov: int p = -E'(cov), int s p = E(cov) - cov E'(cov).
    const long double norm = integrate_rows(t.rows, false) - m.gap_derivative(beta, cov);
    const long double mean = integrate_rows(t.rows, true) + m.gap_probability(beta, cov) -
                             cov * m.gap_derivative(beta, cov);
    CAPTURE(beta);
    CHECK(std::fabs(norm - 1) < 1e-4L);
    CHECK(std::fabs(mean - 1) < 1e-4L);
  }
}

TEST_CASE("tail policy beyond coverage") {
  const SpacingTable t = shared_model().tabulate(4, 5, 0.05L);
  CHECK(t.metadata.tail_truncated);
  CHECK(t.rows.back().p == 0);
  CHECK(t.rows.back().E == shared_model().gap_probability(4, 4));
}

TEST_CASE("serialization") {
  const SpacingTable t = shared_model().tabulate(1, 1, 0.5L);
  const std::string csv = to_csv(t);
  CHECK(csv.rfind("s,E,p,surmise,deviation\n0,1,0,0,0\n", 0) == 0);
  CHECK(csv == to_csv(shared_model().tabulate(1, 1, 0.5L)));
  CHECK(format_number(0.1L) == "0.10000000000000001");
  const std::string json = to_json(t);
  CHECK(json.find("\"trajectory_hashes\"") != std::string::npos);
  CHECK(json.find("\"generated_at\"") != std::string::npos);
  CHECK(json.find("\"rel_tol\"") != std::string::npos);
}
