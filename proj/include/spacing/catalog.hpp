#ifndef SPACING_CATALOG_HPP
#define SPACING_CATALOG_HPP

#include "spacing/error.hpp"
#include "spacing/exact.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spacing {

/// The transcendents behind the bulk gap probabilities and spacing densities.
///   kSigmaPV         sigma-form of Painleve V, drives E_2 (argument t = pi s)
///   kTildeSigma      its companion, drives dE_2/ds and p_2
///   kSigmaB          Bessel-type sigma-form, drives E_1 (argument x = (pi s/2)^2)
///   kTildeSigmaB     companion, drives dE_1/ds and p_1
///   kSigmaBPlus      same equation as kSigmaB with a different boundary
///                    condition, second term of E_4 (argument x = (pi s)^2)
///   kTildeSigmaBPlus companion, drives the second term of p_4
enum class TranscendentId {
  kSigmaPV,
  kSigmaB,
  kSigmaBPlus,
  kTildeSigma,
  kTildeSigmaB,
  kTildeSigmaBPlus,
};

inline constexpr std::array<TranscendentId, 6> kAllTranscendents = {
    TranscendentId::kSigmaPV,    TranscendentId::kSigmaB,      TranscendentId::kSigmaBPlus,
    TranscendentId::kTildeSigma, TranscendentId::kTildeSigmaB, TranscendentId::kTildeSigmaBPlus,
};

std::string_view name(TranscendentId id);
std::optional<TranscendentId> parse_transcendent(std::string_view text);

/// Shape of the second-degree equation (s y'')^2 = F(s, y, y').
enum class OdeFamily {
  /// F = -4 (s y' - y)(s y' - y + y'^2) + m y'^2
  kJimboMiwaOkamoto,
  /// F = (4 y'^2 - y')(s y' - y) + a y'^2 + b y' + c
  kBessel,
  /// F = (4 y'^2 - y)(s y' - y) + a y^2 + b y + c  (unprimed transcription)
  kBesselUnprimed,
};

/// The equation for kTildeSigmaBPlus has two candidate transcriptions; the
/// series consistency check decides between them.
enum class TildeBPlusReading { kPrimed, kAsPrinted };

/// Map from the spacing variable s to the transcendent's own argument.
enum class ArgumentMap {
  kPiS,             // pi s
  kHalfPiSSquared,  // (pi s / 2)^2
  kPiSSquared,      // (pi s)^2
};

long double map_argument(ArgumentMap map, long double s);
/// d(argument)/ds.
long double map_argument_derivative(ArgumentMap map, long double s);

/// One term c * s^{tau_exponent/2} of a boundary expansion.
struct SeedTerm {
  int tau_exponent;
  PiRational coefficient;
};

struct SeriesSeed {
  std::vector<SeedTerm> terms;  // strictly increasing exponents
};

/// Parameters of the Cosgrove-Scoufis normal form
///   x^2 y''^2 = -4 y'^2 (x y' - y) + A2 (x y' - y) + A3 y' + A4
/// and of the matching Painleve V equation (delta = 0). The catalog
/// transcendent sigma relates to the normal-form y by y = -(sigma - x/8 - offset).
struct CsParameters {
  Rational a2, a3, a4;
  Rational sqrt_2alpha, beta, gamma;
  Rational offset;
};

struct TranscendentSpec {
  TranscendentId id;
  OdeFamily family;
  Rational m;        // kJimboMiwaOkamoto
  Rational a, b, c;  // kBessel, kBesselUnprimed
  SeriesSeed seed;
  ArgumentMap argument_map;
  /// +1 when the gap probability carries exp(+int sigma/t), -1 for exp(-int).
  int integral_sign;
  std::optional<CsParameters> cs;
};

/// Immutable catalog entry. The reading only affects kTildeSigmaBPlus.
const TranscendentSpec& lookup(TranscendentId id,
                               TildeBPlusReading reading = TildeBPlusReading::kPrimed);

inline long double lift(const Rational& r, long double /*like*/) {
  return static_cast<long double>(r);
}
/// Any other floating type; catalog rationals have small numerators and
/// denominators.
template <class T>
T lift(const Rational& r, const T& /*like*/) {
  return T(static_cast<long long>(numerator(r))) / T(static_cast<long long>(denominator(r)));
}
inline ExactSeries lift(const Rational& r, const ExactSeries& like) {
  return ExactSeries::constant(PiRational(r), like.cap());
}

/// Right-hand side F of (s y'')^2 = F(s, y, y'). Generic over long double
/// and exact series so the same expression feeds integration and the
/// order-by-order series construction.
template <class T>
T forcing(const TranscendentSpec& spec, const T& s, const T& y, const T& dy) {
  const T d = s * dy - y;
  switch (spec.family) {
    case OdeFamily::kJimboMiwaOkamoto: {
      const T four = lift(Rational(4), s);
      return lift(spec.m, s) * dy * dy - four * d * (d + dy * dy);
    }
    case OdeFamily::kBessel: {
      const T four = lift(Rational(4), s);
      return (four * dy * dy - dy) * d + lift(spec.a, s) * dy * dy + lift(spec.b, s) * dy +
             lift(spec.c, s);
    }
    case OdeFamily::kBesselUnprimed: {
      const T four = lift(Rational(4), s);
      return (four * dy * dy - y) * d + lift(spec.a, s) * y * y + lift(spec.b, s) * y +
             lift(spec.c, s);
    }
  }
  return T{};
}

/// (s y'')^2 - F(s, y, y'): zero iff the triple satisfies the equation at s.
template <class T>
T residual_expr(const TranscendentSpec& spec, const T& s, const T& y, const T& dy, const T& ddy) {
  const T sd = s * ddy;
  return sd * sd - forcing(spec, s, y, dy);
}

long double residual(const TranscendentSpec& spec, long double s, long double y, long double dy,
                     long double ddy);

/// Sum of magnitudes of the individual terms of the residual; the scale
/// against which a residual is judged small.
template <class T>
T residual_scale(const TranscendentSpec& spec, const T& s, const T& y, const T& dy,
                 const T& ddy) {
  using std::fabs;
  const T d = s * dy - y;
  const T lhs = (s * ddy) * (s * ddy);
  switch (spec.family) {
    case OdeFamily::kJimboMiwaOkamoto:
      return lhs + 4 * fabs(d) * (fabs(d) + dy * dy) + fabs(lift(spec.m, s)) * dy * dy;
    case OdeFamily::kBessel:
      return lhs + fabs(4 * dy * dy - dy) * fabs(d) + fabs(lift(spec.a, s)) * dy * dy +
             fabs(lift(spec.b, s) * dy) + fabs(lift(spec.c, s));
    case OdeFamily::kBesselUnprimed:
      return lhs + fabs(4 * dy * dy - y) * fabs(d) + fabs(lift(spec.a, s)) * y * y +
             fabs(lift(spec.b, s) * y) + fabs(lift(spec.c, s));
  }
  return lhs;
}

/// y''' from differentiating the equation once and cancelling the common
/// factor y''. The result is polynomial in (s, y, y', y'') divided by s^2.
/// Throws kInvalidArgument for kBesselUnprimed, where no such factor exists.
template <class T>
T third_derivative(const TranscendentSpec& spec, const T& s, const T& y, const T& dy,
                   const T& ddy) {
  const T d = s * dy - y;
  switch (spec.family) {
    case OdeFamily::kJimboMiwaOkamoto: {
      const T m = lift(spec.m, s);
      return -(2 * s * ddy + 4 * s * (d + dy * dy) + 4 * d * (s + 2 * dy) - 2 * m * dy) /
             (2 * s * s);
    }
    case OdeFamily::kBessel: {
      const T a = lift(spec.a, s);
      const T b = lift(spec.b, s);
      return ((8 * dy - 1) * d + (4 * dy * dy - dy) * s + 2 * a * dy + b - 2 * s * ddy) /
             (2 * s * s);
    }
    case OdeFamily::kBesselUnprimed:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no polynomial third-order form for the unprimed transcription of " +
                  std::string(name(spec.id)));
}

}  // namespace spacing

#endif  // SPACING_CATALOG_HPP
