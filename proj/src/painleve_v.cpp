#include "spacing/painleve_v.hpp"

#include "spacing/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace spacing {

namespace {

constexpr long double kDegenerateDistance = 1e-12L;

long double ld(const Rational& r) { return static_cast<long double>(r); }

void check_u(long double u) {
  if (!std::isfinite(u) || std::fabs(u) < kDegenerateDistance ||
      std::fabs(u - 1) < kDegenerateDistance) {
    throw Error(ErrorCode::kDegenerateU, "u = " + std::to_string(static_cast<double>(u)) +
                                             " at a pole of the Painleve V coefficients");
  }
}

// (w - u)^2 and (w - a u)^2 from the two defining formulas, w = x u'/(u - 1).
struct Squares {
  long double r1, r2;
};

Squares squares(long double a, long double beta, long double gamma, long double x, long double y,
                long double dy, long double u) {
  const long double r1 = 4 * u * y + u * (1 - a) * (1 - a) * (u - 1) + 2 * beta * (u - 1) -
                         gamma * x * u * (u + 1) / (u - 1);
  const long double r2 = -4 * x * u * (dy + gamma / 4) / (u - 1) - 2 * beta;
  return {r1, r2};
}

long double w_of(long double a, const Squares& sq, long double u) {
  return ((sq.r1 - sq.r2) / ((a - 1) * u) + (1 + a) * u) / 2;
}

}  // namespace

NormalFormCoefficients cs_coefficients(const PainleveParameters& p) {
  const Rational one_minus = 1 - p.sqrt_2alpha;
  const Rational half_sq = one_minus * one_minus / 2;
  return {p.gamma * p.gamma / 4, p.gamma * (p.beta + half_sq),
          p.gamma * p.gamma / 4 * (-p.beta + half_sq)};
}

PainleveParameters painleve_parameters(const CsParameters& cs) {
  return {cs.sqrt_2alpha, cs.beta, cs.gamma};
}

NormalFormCoefficients normal_form(const CsParameters& cs) { return {cs.a2, cs.a3, cs.a4}; }

BesselCoefficients regenerate_bessel_coefficients(const CsParameters& cs) {
  if (cs.a2 != Rational(1, 16)) {
    throw Error(ErrorCode::kInvalidArgument,
                "A2 must be 1/16 for the (4p^2 - p) D shape of the sigma equation");
  }
  return {4 * cs.offset, -(cs.offset + cs.a3), cs.a3 / 8 + cs.a4};
}

long double cs_normal_form_residual(const NormalFormCoefficients& k, long double x, long double y,
                                    long double dy, long double ddy) {
  const long double d = x * dy - y;
  const long double lhs = x * x * ddy * ddy;
  const long double rhs = -4 * dy * dy * d + ld(k.a2) * d + ld(k.a3) * dy + ld(k.a4);
  return lhs - rhs;
}

long double painleve_v_rhs(const PainleveVState& st) {
  check_u(st.u);
  const long double u = st.u, du = st.du, x = st.x;
  const long double alpha = ld(st.params.alpha());
  const long double beta = ld(st.params.beta);
  const long double gamma = ld(st.params.gamma);
  return (1 / (2 * u) + 1 / (u - 1)) * du * du - du / x +
         (u - 1) * (u - 1) / (x * x) * (alpha * u + beta / u) + gamma * u / x;
}

NormalFormValue cs_y_from_u(const PainleveVState& st) {
  check_u(st.u);
  const long double u = st.u, du = st.du, x = st.x;
  const long double a = ld(st.params.sqrt_2alpha);
  const long double beta = ld(st.params.beta);
  const long double gamma = ld(st.params.gamma);
  const long double inner = x * du / (u - 1) - u;
  const long double y = inner * inner / (4 * u) - (1 - a) * (1 - a) * (u - 1) / 4 -
                        beta / 2 * (u - 1) / u + gamma * x / 4 * (u + 1) / (u - 1);
  const long double q = du - a * u * (u - 1) / x;
  const long double dy = -x / (4 * u * (u - 1)) * q * q - beta / (2 * x) * (u - 1) / u - gamma / 4;
  return {y, dy};
}

PainleveVState cs_map_to_u(const TranscendentSpec& spec, long double s, long double sigma,
                           long double first, long double second,
                           std::optional<long double> hint) {
  if (!spec.cs) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name(spec.id)) + " has no Cosgrove-Scoufis data");
  }
  if (sigma == 0) throw Error(ErrorCode::kDegenerateU, "sigma = 0");
  const CsParameters& cs = *spec.cs;
  const PainleveParameters params = painleve_parameters(cs);
  const long double a = ld(cs.sqrt_2alpha);
  const long double beta = ld(cs.beta);
  const long double gamma = ld(cs.gamma);
  const long double x = s;
  const long double y = -(sigma - x / 8 - ld(cs.offset));
  const long double dy = -(first - 0.125L);
  const long double ddy = -second;

  if (cs.sqrt_2alpha == 1) {
    const long double n = x * (gamma - 4 * dy);
    const long double m = 4 * y + 2 * beta - gamma * x;
    if (m == 0) throw Error(ErrorCode::kDegenerateU, "vanishing denominator in u - 1");
    const long double dn = gamma - 4 * dy - 4 * x * ddy;
    const long double dm = 4 * dy - gamma;
    const long double u = 1 + n / m;
    check_u(u);
    return {x, u, (dn * m - n * dm) / (m * m), params};
  }

  if (!hint) {
    throw Error(ErrorCode::kInvalidArgument,
                "inverting the general Cosgrove-Scoufis map needs a starting value for u");
  }
  auto g = [&](long double u) {
    const Squares sq = squares(a, beta, gamma, x, y, dy, u);
    const long double w = w_of(a, sq, u);
    return (w - a * u) * (w - a * u) - sq.r2;
  };
  // Expand a bracket around the hint without crossing the poles at 0 and 1.
  const long double h = *hint;
  long double lo = h, hi = h;
  long double width = 1e-6L * std::max(1.0L, std::fabs(h));
  bool found = false;
  for (int it = 0; it < 80 && !found; ++it) {
    lo = h - width;
    hi = h + width;
    if ((lo < 0 && h > 0) || (lo < 1 && h > 1)) lo = h > 1 ? 1 + kDegenerateDistance : kDegenerateDistance;
    if ((hi > 0 && h < 0) || (hi > 1 && h < 1)) hi = h < 0 ? -kDegenerateDistance : 1 - kDegenerateDistance;
    found = g(lo) * g(hi) <= 0;
    width *= 2;
  }
  if (!found) throw Error(ErrorCode::kDegenerateU, "no root of the u equation near the hint");
  std::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, boost::math::tools::eps_tolerance<long double>(60), max_iter);
  const long double u = (root.first + root.second) / 2;
  check_u(u);
  const Squares sq = squares(a, beta, gamma, x, y, dy, u);
  const long double w = w_of(a, sq, u);
  return {x, u, w * (u - 1) / x, params};
}

long double tilde_from_u(long double sigma, long double u, long double shift) {
  return sigma + (u - 1) + shift;
}

std::optional<TranscendentId> tilde_partner(TranscendentId base) {
  switch (base) {
    case TranscendentId::kSigmaPV:
      return TranscendentId::kTildeSigma;
    case TranscendentId::kSigmaB:
      return TranscendentId::kTildeSigmaB;
    case TranscendentId::kSigmaBPlus:
      return TranscendentId::kTildeSigmaBPlus;
    default:
      return std::nullopt;
  }
}

namespace {

Rational tilde_shift(const TranscendentSpec& base) {
  const auto partner = tilde_partner(base.id);
  if (!partner) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name(base.id)) + " is not the base of a derivative identity");
  }
  if (base.family == OdeFamily::kJimboMiwaOkamoto) return -1;
  return lookup(*partner).cs->offset - base.cs->offset;
}

}  // namespace

long double tilde_from_base(const TranscendentSpec& base, long double s, long double sigma,
                            long double first) {
  const long double shift = ld(tilde_shift(base));
  if (sigma == 0) throw Error(ErrorCode::kDegenerateU, "sigma = 0");
  const long double ratio = s * first / sigma;
  if (base.family == OdeFamily::kJimboMiwaOkamoto) return sigma + ratio + shift;
  return sigma - ratio + shift;
}

ExactSeries tilde_series_from_base(const TranscendentSpec& base, const ExactSeries& sigma) {
  const Rational shift = tilde_shift(base);
  const int v = sigma.valuation();
  if (v == INT_MAX) throw Error(ErrorCode::kDegenerateU, "zero series");
  const PiRational lead = sigma.coefficient(v);
  const int cap = sigma.cap() - v;

  // sigma = lead tau^v (1 + r); s sigma' = lead tau^v q with q_k = (k+v)/2 * c_{k+v}/lead.
  std::map<int, PiRational> r, q;
  for (const auto& [k, c] : sigma.terms()) {
    const auto scaled = c.divide(lead);
    if (!scaled) {
      throw Error(ErrorCode::kInvalidArgument, "leading coefficient is not a pi-monomial");
    }
    if (k != v) r[k - v] = *scaled;
    PiRational qk = *scaled;
    qk *= Rational(k, 2);
    q[k - v] = qk;
  }
  // b = 1/(1 + r) by the usual recurrence.
  std::vector<PiRational> b(cap + 1);
  b[0] = PiRational(1);
  for (int n = 1; n <= cap; ++n) {
    PiRational acc;
    for (const auto& [k, rk] : r) {
      if (k > n) break;
      acc -= rk * b[n - k];
    }
    b[n] = acc;
  }
  ExactSeries ratio(cap);
  for (int n = 0; n <= cap; ++n) {
    PiRational acc;
    for (const auto& [k, qk] : q) {
      if (k > n) break;
      acc += qk * b[n - k];
    }
    ratio.set(n, acc);
  }

  ExactSeries out(cap);
  for (const auto& [k, c] : sigma.terms()) out.set(k, c);
  if (base.family == OdeFamily::kJimboMiwaOkamoto) {
    out += ratio;
  } else {
    out -= ratio;
  }
  out += ExactSeries::constant(PiRational(shift), cap);
  return out;
}

TwoRouteReport two_route_tilde(const SolutionTrajectory& base, const SolutionTrajectory& tilde,
                               long double x_lo, long double x_hi, int points) {
  if (tilde_partner(base.id()) != tilde.id()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name(tilde.id())) +
                                                 " is not the tilde partner of " +
                                                 std::string(name(base.id())));
  }
  if (!(x_lo > 0 && x_hi > x_lo) || points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < x_lo < x_hi and at least two points");
  }
  const long double shift = ld(tilde_shift(base.spec()));
  TwoRouteReport out;
  out.points = points;
  for (int i = 0; i < points; ++i) {
    const long double x = x_lo + (x_hi - x_lo) * i / (points - 1);
    const DenseValue b = base.at(x);
    const DenseValue w = tilde.at(x);
    const PainleveVState st = cs_map_to_u(base.spec(), x, b.sigma, b.first, b.second);
    const long double diff = std::fabs(w.sigma - tilde_from_u(b.sigma, st.u, shift));
    if (diff >= out.max_diff) {
      out.max_diff = diff;
      out.worst_x = x;
    }
    if (tilde.spec().cs) {
      const PainleveVState st2 = cs_map_to_u(tilde.spec(), x, w.sigma, w.first, w.second, st.u);
      out.max_u_diff = std::max(out.max_u_diff, std::fabs(st2.u - st.u));
    }
  }
  return out;
}

}  // namespace spacing
