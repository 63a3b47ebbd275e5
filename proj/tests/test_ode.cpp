#include "doctest.h"
#include "spacing/fredholm.hpp"
#include "spacing/ode.hpp"
#include "support.hpp"

#include <cmath>

using namespace spacing;
using spacing::test::error_of;
using spacing::test::kPi;
using spacing::test::shared_model;

TEST_CASE("sigma trajectory reproduces the Fredholm determinant") {
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kSigmaPV);
  for (long double s : {0.25L, 1.0L, 2.0L, 3.0L, 4.0L}) {
    CHECK(std::fabs(std::exp(tr.integral(kPi * s)) - sine_kernel_det(s, 80)) < 1e-12L);
  }
}

TEST_CASE("trajectories stay on their equations") {
  for (TranscendentId id : kAllTranscendents) {
    const SolutionTrajectory& tr = shared_model().trajectory(id);
    CAPTURE(name(id));
    CHECK(tr.max_relative_residual() < 1e-15L);
    CHECK(tr.branch_flips().empty());
    CHECK(tr.diagnostics().amplification >= 1);
    CHECK(tr.diagnostics().local_tolerance >= kLocalToleranceFloor);
    // Dense values between nodes keep the residual small too.
    const auto& spec = tr.spec();
    for (int i = 1; i < 40; ++i) {
      const long double x = tr.start() + (tr.end() - tr.start()) * i / 40;
      const DenseValue v = tr.at(x);
      const long double r = residual(spec, x, v.sigma, v.first, v.second);
      CHECK(std::fabs(r) <= 1e-12L * residual_scale<long double>(spec, x, v.sigma, v.first, v.second));
    }
  }
}

TEST_CASE("dense output is continuous and consistent with the nodes") {
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kSigmaB);
  const auto& nodes = tr.nodes();
  const TrajectoryNode& n = nodes[nodes.size() / 2];
  const DenseValue v = tr.at(n.s);
  CHECK(std::fabs(v.sigma - n.sigma) <= 1e-15L * std::fabs(n.sigma));
  // sigma' by central differences of the dense sigma, integral' = sigma / x.
  const long double x = 50, h = 1e-4L;
  const DenseValue c = tr.at(x);
  CHECK(std::fabs((tr.at(x + h).sigma - tr.at(x - h).sigma) / (2 * h) - c.first) < 1e-8L);
  CHECK(std::fabs((tr.integral(x + h) - tr.integral(x - h)) / (2 * h) - c.sigma / x) < 1e-8L);
}

TEST_CASE("series and integrator agree across the handoff") {
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kTildeSigmaB);
  const long double x = tr.series().trust_radius;
  const SeriesValue sv = eval_series(tr.series(), x);
  CHECK(std::fabs(tr.at(x).sigma - sv.value) <= 1e-12L * std::fabs(sv.value));
  CHECK(tr.at(tr.start() / 2).sigma == eval_series(tr.series(), tr.start() / 2).value);
}

TEST_CASE("square-root form follows the same solution on a short range") {
  const TranscendentSpec& spec = lookup(TranscendentId::kSigmaPV);
  IntegrationOptions opt;
  opt.form = IntegrationForm::kSquareRoot;
  opt.rel_tol = 1e-10L;
  const SolutionTrajectory sq = integrate(spec, extend_series(spec), kPi, opt);
  const SolutionTrajectory& ref = shared_model().trajectory(TranscendentId::kSigmaPV);
  CHECK(std::fabs(sq.integral(kPi) - ref.integral(kPi)) < 1e-9L);
}

TEST_CASE("integration contract errors") {
  const TranscendentSpec& spec = lookup(TranscendentId::kSigmaPV);
  const SeriesExpansion series = extend_series(spec);
  IntegrationOptions loose;
  loose.rel_tol = 1e-5L;
  CHECK(error_of([&] { integrate(spec, series, 10, loose); }) == ErrorCode::kInvalidArgument);
  CHECK(error_of([&] { integrate(spec, series, series.trust_radius / 4); }) ==
        ErrorCode::kInvalidArgument);
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kSigmaPV);
  CHECK(error_of([&] { tr.at(tr.end() * 1.01L); }) == ErrorCode::kRangeExceeded);
  CHECK(error_of([&] { tr.at(-1); }) == ErrorCode::kRangeExceeded);
}

TEST_CASE("sigma'' from the square root and its branch") {
  const TranscendentSpec& spec = lookup(TranscendentId::kSigmaPV);
  // D = s sigma' - sigma = 1, sigma' = 0: F = -4 < 0, no real sigma''.
  CHECK(error_of([&] { sigma_dd(spec, 1, -1, 0, 1); }) == ErrorCode::kBranchAmbiguity);
  // s = 2, sigma = 5/2, sigma' = 1: D = -1/2, F = 1, sigma'' = 1/2.
  const long double up = sigma_dd(spec, 2, 2.5L, 1, 1);
  const long double down = sigma_dd(spec, 2, 2.5L, 1, -1);
  CHECK(std::fabs(up - 0.5L) < 1e-18L);
  CHECK(down == -up);
}
