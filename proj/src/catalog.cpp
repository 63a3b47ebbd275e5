#include "spacing/catalog.hpp"

#include "spacing/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace spacing {

namespace {

constexpr long double kPi = boost::math::constants::pi<long double>();

// Pi-rational literal r * pi^k.
PiRational pr(long num, long den, int pi_power) { return PiRational(num, den, pi_power); }

struct CatalogTable {
  std::array<TranscendentSpec, 6> entries;
  TranscendentSpec tilde_b_plus_as_printed;
};

CsParameters bessel_base_parameters() {
  // sqrt(2 alpha) = 1, beta = -1/8, gamma = 1/2  <->  (A2, A3, A4) = (1/16, -1/16, 1/128)
  return CsParameters{Rational(1, 16), Rational(-1, 16), Rational(1, 128),
                      Rational(1),     Rational(-1, 8),  Rational(1, 2),
                      Rational(1, 16)};
}

CsParameters bessel_tilde_parameters(const Rational& offset) {
  // sqrt(2 alpha) = -1, beta = -1/8, gamma = 1/2  <->  (A2, A3, A4) = (1/16, 15/16, 17/128)
  return CsParameters{Rational(1, 16), Rational(15, 16), Rational(17, 128),
                      Rational(-1),    Rational(-1, 8),  Rational(1, 2),
                      offset};
}

CatalogTable build_table() {
  CatalogTable t;
  auto& e = t.entries;

  e[0] = TranscendentSpec{TranscendentId::kSigmaPV,
                          OdeFamily::kJimboMiwaOkamoto,
                          Rational(0),
                          Rational(0), Rational(0), Rational(0),
                          SeriesSeed{{{2, pr(-1, 1, -1)}, {4, pr(-1, 1, -2)}}},
                          ArgumentMap::kPiS,
                          +1,
                          std::nullopt};

  e[1] = TranscendentSpec{TranscendentId::kSigmaB,
                          OdeFamily::kBessel,
                          Rational(0),
                          Rational(1, 4), Rational(0), Rational(0),
                          SeriesSeed{{{1, pr(1, 1, -1)}, {2, pr(2, 1, -2)}}},
                          ArgumentMap::kHalfPiSSquared,
                          -1,
                          bessel_base_parameters()};

  e[2] = TranscendentSpec{TranscendentId::kSigmaBPlus,
                          OdeFamily::kBessel,
                          Rational(0),
                          Rational(1, 4), Rational(0), Rational(0),
                          SeriesSeed{{{3, pr(1, 3, -1)}, {6, pr(2, 27, -2)}}},
                          ArgumentMap::kPiSSquared,
                          -1,
                          bessel_base_parameters()};

  e[3] = TranscendentSpec{TranscendentId::kTildeSigma,
                          OdeFamily::kJimboMiwaOkamoto,
                          Rational(4),
                          Rational(0), Rational(0), Rational(0),
                          SeriesSeed{{{6, pr(-1, 3, -1)}}},
                          ArgumentMap::kPiS,
                          +1,
                          std::nullopt};

  e[4] = TranscendentSpec{TranscendentId::kTildeSigmaB,
                          OdeFamily::kBessel,
                          Rational(0),
                          Rational(9, 4), Rational(-3, 2), Rational(1, 4),
                          SeriesSeed{{{2, pr(1, 3, 0)}, {4, pr(-1, 45, 0)}, {5, pr(8, 135, -1)}}},
                          ArgumentMap::kHalfPiSSquared,
                          -1,
                          bessel_tilde_parameters(Rational(9, 16))};

  // 8 / (3^3 * 5^3 * 7 * pi)
  const SeriesSeed tilde_b_plus_seed{{{2, pr(1, 5, 0)}, {7, pr(8, 27 * 125 * 7, -1)}}};

  e[5] = TranscendentSpec{TranscendentId::kTildeSigmaBPlus,
                          OdeFamily::kBessel,
                          Rational(0),
                          Rational(25, 4), Rational(-5, 2), Rational(1, 4),
                          tilde_b_plus_seed,
                          ArgumentMap::kPiSSquared,
                          -1,
                          bessel_tilde_parameters(Rational(25, 16))};

  t.tilde_b_plus_as_printed = e[5];
  t.tilde_b_plus_as_printed.family = OdeFamily::kBesselUnprimed;
  t.tilde_b_plus_as_printed.cs.reset();
  return t;
}

const CatalogTable& table() {
  static const CatalogTable kTable = build_table();
  return kTable;
}

}  // namespace

std::string_view name(TranscendentId id) {
  switch (id) {
    case TranscendentId::kSigmaPV: return "SIGMA_PV";
    case TranscendentId::kSigmaB: return "SIGMA_B";
    case TranscendentId::kSigmaBPlus: return "SIGMA_B_PLUS";
    case TranscendentId::kTildeSigma: return "TILDE_SIGMA";
    case TranscendentId::kTildeSigmaB: return "TILDE_SIGMA_B";
    case TranscendentId::kTildeSigmaBPlus: return "TILDE_SIGMA_B_PLUS";
  }
  return "?";
}

std::optional<TranscendentId> parse_transcendent(std::string_view text) {
  for (auto id : kAllTranscendents) {
    if (name(id) == text) return id;
  }
  return std::nullopt;
}

long double map_argument(ArgumentMap map, long double s) {
  switch (map) {
    case ArgumentMap::kPiS: return kPi * s;
    case ArgumentMap::kHalfPiSSquared: return (kPi * s / 2) * (kPi * s / 2);
    case ArgumentMap::kPiSSquared: return (kPi * s) * (kPi * s);
  }
  return 0;
}

long double map_argument_derivative(ArgumentMap map, long double s) {
  switch (map) {
    case ArgumentMap::kPiS: return kPi;
    case ArgumentMap::kHalfPiSSquared: return kPi * kPi * s / 2;
    case ArgumentMap::kPiSSquared: return 2 * kPi * kPi * s;
  }
  return 0;
}

const TranscendentSpec& lookup(TranscendentId id, TildeBPlusReading reading) {
  if (id == TranscendentId::kTildeSigmaBPlus && reading == TildeBPlusReading::kAsPrinted) {
    return table().tilde_b_plus_as_printed;
  }
  return table().entries[static_cast<std::size_t>(id)];
}

long double residual(const TranscendentSpec& spec, long double s, long double y, long double dy,
                     long double ddy) {
  return residual_expr<long double>(spec, s, y, dy, ddy);
}

}  // namespace spacing
