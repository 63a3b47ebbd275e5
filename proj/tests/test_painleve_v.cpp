#include "doctest.h"
#include "spacing/painleve_v.hpp"
#include "support.hpp"

#include <cmath>

using namespace spacing;
using spacing::test::error_of;
using spacing::test::kPi;
using spacing::test::shared_model;

TEST_CASE("normal-form coefficients follow from the Painleve parameters") {
  for (TranscendentId id : kAllTranscendents) {
    const TranscendentSpec& spec = lookup(id);
    if (!spec.cs) continue;
    CAPTURE(name(id));
    CHECK(cs_coefficients(painleve_parameters(*spec.cs)) == normal_form(*spec.cs));
    const BesselCoefficients abc = regenerate_bessel_coefficients(*spec.cs);
    CHECK(abc.a == spec.a);
    CHECK(abc.b == spec.b);
    CHECK(abc.c == spec.c);
  }
}

TEST_CASE("A2 other than 1/16 cannot produce the sigma shape") {
  CsParameters cs = *lookup(TranscendentId::kSigmaB).cs;
  cs.a2 = Rational(1, 8);
  CHECK(error_of([&] { regenerate_bessel_coefficients(cs); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("u built from sigma_B maps back to the normal form") {
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kSigmaB);
  const CsParameters& cs = *tr.spec().cs;
  for (long double x : {0.5L, 3.0L, 20.0L, 80.0L}) {
    const DenseValue v = tr.at(x);
    const PainleveVState st = cs_map_to_u(tr.spec(), x, v.sigma, v.first, v.second);
    const NormalFormValue y = cs_y_from_u(st);
    const long double want_y = -(v.sigma - x / 8 - static_cast<long double>(cs.offset));
    const long double want_dy = -(v.first - 0.125L);
    CHECK(std::fabs(y.y - want_y) < 1e-13L * (1 + std::fabs(want_y)));
    CHECK(std::fabs(y.dy - want_dy) < 1e-13L * (1 + std::fabs(want_dy)));
    CHECK(std::fabs(cs_normal_form_residual(normal_form(cs), x, want_y, want_dy, -v.second)) <
          1e-12L * (1 + x));
  }
}

TEST_CASE("u satisfies Painleve V along the trajectory") {
  const SolutionTrajectory& tr = shared_model().trajectory(TranscendentId::kSigmaB);
  auto u_at = [&](long double x) {
    const DenseValue v = tr.at(x);
    return cs_map_to_u(tr.spec(), x, v.sigma, v.first, v.second);
  };
  for (long double x : {1.0L, 10.0L, 60.0L}) {
    const long double h = 1e-3L * x;
    const PainleveVState st = u_at(x);
    const long double upp = (u_at(x + h).u - 2 * st.u + u_at(x - h).u) / (h * h);
    const long double up = (u_at(x + h).u - u_at(x - h).u) / (2 * h);
    CHECK(std::fabs(up - st.du) < 1e-6L * (1 + std::fabs(st.du)));
    CHECK(std::fabs(upp - painleve_v_rhs(st)) < 1e-5L * (1 + std::fabs(upp)));
  }
}

TEST_CASE("general inversion recovers u from the tilde transcendent") {
  const SolutionTrajectory& base = shared_model().trajectory(TranscendentId::kSigmaB);
  const SolutionTrajectory& tilde = shared_model().trajectory(TranscendentId::kTildeSigmaB);
  const TwoRouteReport r = two_route_tilde(base, tilde, 0.1L, 80, 60);
  CHECK(r.max_u_diff < 1e-8L);
  CHECK(r.max_diff < 1e-8L);
  const DenseValue w = tilde.at(5);
  CHECK(error_of([&] { cs_map_to_u(tilde.spec(), 5, w.sigma, w.first, w.second); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("closed-form tilde maps agree with the integrated tilde transcendents") {
  const std::pair<TranscendentId, TranscendentId> pairs[] = {
      {TranscendentId::kSigmaPV, TranscendentId::kTildeSigma},
      {TranscendentId::kSigmaB, TranscendentId::kTildeSigmaB},
      {TranscendentId::kSigmaBPlus, TranscendentId::kTildeSigmaBPlus}};
  for (const auto& [b, t] : pairs) {
    const SolutionTrajectory& base = shared_model().trajectory(b);
    const SolutionTrajectory& tilde = shared_model().trajectory(t);
    CAPTURE(name(t));
    for (int i = 1; i <= 20; ++i) {
      const long double x = base.end() * i / 21;
      const DenseValue v = base.at(x);
      const long double want = tilde.at(x).sigma;
      CHECK(std::fabs(tilde_from_base(base.spec(), x, v.sigma, v.first) - want) <
            1e-9L * (1 + std::fabs(want)));
    }
  }
  CHECK(tilde_partner(TranscendentId::kTildeSigma) == std::nullopt);
}

TEST_CASE("degenerate u") {
  PainleveVState st{1, 1, 0.5L, painleve_parameters(*lookup(TranscendentId::kSigmaB).cs)};
  CHECK(error_of([&] { painleve_v_rhs(st); }) == ErrorCode::kDegenerateU);
  st.u = 0;
  CHECK(error_of([&] { cs_y_from_u(st); }) == ErrorCode::kDegenerateU);
}
