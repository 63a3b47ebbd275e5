#ifndef SPACING_PAINLEVE_V_HPP
#define SPACING_PAINLEVE_V_HPP

#include "spacing/catalog.hpp"
#include "spacing/exact.hpp"
#include "spacing/ode.hpp"

#include <optional>

namespace spacing {

/// Painleve V parameters with delta = 0. alpha enters only through
/// sqrt(2 alpha), whose sign matters in the y, y' formulas.
struct PainleveParameters {
  Rational sqrt_2alpha;
  Rational beta;
  Rational gamma;

  Rational alpha() const { return sqrt_2alpha * sqrt_2alpha / 2; }
};

struct NormalFormCoefficients {
  Rational a2, a3, a4;
  friend bool operator==(const NormalFormCoefficients&, const NormalFormCoefficients&) = default;
};

/// (A2, A3, A4) of x^2 y''^2 = -4 y'^2 (x y' - y) + A2 (x y' - y) + A3 y' + A4
/// in terms of the Painleve parameters.
NormalFormCoefficients cs_coefficients(const PainleveParameters& p);

PainleveParameters painleve_parameters(const CsParameters& cs);
NormalFormCoefficients normal_form(const CsParameters& cs);

struct BesselCoefficients {
  Rational a, b, c;
  friend bool operator==(const BesselCoefficients&, const BesselCoefficients&) = default;
};

/// Substitutes y = -(sigma - x/8 - offset) into the normal form, giving
///   (x sigma'')^2 = (4 sigma'^2 - sigma')(x sigma' - sigma) + a sigma'^2 + b sigma' + c.
/// Requires A2 = 1/16 (otherwise the sigma'^2 D term does not take this
/// shape); kInvalidArgument if not.
BesselCoefficients regenerate_bessel_coefficients(const CsParameters& cs);

/// Left minus right of the normal form.
long double cs_normal_form_residual(const NormalFormCoefficients& k, long double x, long double y,
                                    long double dy, long double ddy);

struct PainleveVState {
  long double x;
  long double u;
  long double du;
  PainleveParameters params;  // delta = 0
};

/// u'' from the Painleve V equation (delta = 0). kDegenerateU at u in {0, 1}.
long double painleve_v_rhs(const PainleveVState& state);

/// y and y' of the normal form from a Painleve V state.
struct NormalFormValue {
  long double y;
  long double dy;
};
NormalFormValue cs_y_from_u(const PainleveVState& state);

/// Painleve V state of a catalog transcendent with Cosgrove-Scoufis data.
/// With sqrt(2 alpha) = 1 the two defining formulas combine to the closed
/// form u - 1 = x (gamma - 4y') / (4y + 2 beta - gamma x), which for the
/// sigma_B pair is u - 1 = -s sigma'/sigma. Otherwise u is found as a root
/// of the eliminated equation near `hint` (required in that case).
/// Errors: kInvalidArgument (no Cosgrove-Scoufis data, missing hint),
/// kDegenerateU (sigma = 0, u at 0 or 1, or no root near the hint).
PainleveVState cs_map_to_u(const TranscendentSpec& spec, long double s, long double sigma,
                           long double first, long double second,
                           std::optional<long double> hint = std::nullopt);

/// sigma + (u - 1) + shift. shift = 1/2 maps sigma_B to its tilde partner.
long double tilde_from_u(long double sigma, long double u, long double shift = 0.5L);

/// The transcendent whose derivative identity pairs with `base`
/// (sigma -> tilde sigma, sigma_B -> tilde sigma_B, sigma_B+ -> tilde sigma_B+);
/// nullopt for the tilde transcendents themselves.
std::optional<TranscendentId> tilde_partner(TranscendentId base);

/// Closed-form tilde transcendent from its base at one point:
///   sigma:           tilde = sigma + t sigma'/sigma - 1
///   Bessel family:   tilde = sigma - x sigma'/sigma + (offset_tilde - offset_base)
/// kInvalidArgument if `base` has no partner, kDegenerateU at sigma = 0.
long double tilde_from_base(const TranscendentSpec& base, long double s, long double sigma,
                            long double first);

/// The same map applied to an exact truncated base series. The result is
/// exact through tau^(cap - valuation(base)).
ExactSeries tilde_series_from_base(const TranscendentSpec& base, const ExactSeries& sigma);

struct TwoRouteReport {
  long double max_diff = 0;    // |tilde direct - tilde via u|
  long double worst_x = 0;
  long double max_u_diff = 0;  // u from the base vs u from the tilde trajectory
  int points = 0;
};

/// Compares the integrated tilde transcendent with the one rebuilt from the
/// base trajectory through the Painleve V variable u, at `points` evenly
/// spaced arguments in [x_lo, x_hi]. The tilde side is also mapped to u
/// (with the base value as the starting guess) and compared.
TwoRouteReport two_route_tilde(const SolutionTrajectory& base, const SolutionTrajectory& tilde,
                               long double x_lo, long double x_hi, int points = 200);

}  // namespace spacing

#endif  // SPACING_PAINLEVE_V_HPP
