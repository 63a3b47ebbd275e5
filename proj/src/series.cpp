#include "spacing/series.hpp"

#include "spacing/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace spacing {

namespace {

// Extra tau orders kept beyond the order being read; covers the negative
// valuations of sigma' and sigma'' in every product of the residual.
constexpr int kCapMargin = 16;
// Unknown coefficients up to this many tau orders above the residual order
// are probed for dependence.
constexpr int kProbeWindow = 6;
// Terms beyond the truncation order probed when locating the check limit.
constexpr int kBeyondProbe = 8;
// Extra tau orders solved only to estimate the truncation error.
constexpr int kEstimateOrders = 4;

using Coefficients = std::map<int, PiRational>;

ExactSeries series_from(const Coefficients& coeffs, int cap) {
  ExactSeries sigma(cap);
  for (const auto& [k, c] : coeffs) sigma.set(k, c);
  return sigma;
}

PiRational residual_coefficient(const TranscendentSpec& spec, const Coefficients& coeffs,
                                int order) {
  const int cap = order + kCapMargin;
  return exact_residual(spec, series_from(coeffs, cap), cap).coefficient(order);
}

int residual_valuation(const TranscendentSpec& spec, const Coefficients& coeffs, int cap) {
  return exact_residual(spec, series_from(coeffs, cap), cap).valuation();
}

struct Polynomial {
  std::array<PiRational, 4> c;  // c[i] multiplies x^i
  int degree() const {
    for (int i = 3; i >= 0; --i) {
      if (!c[i].is_zero()) return i;
    }
    return -1;
  }
};

std::vector<PiRational> dedupe(std::vector<PiRational> roots) {
  std::vector<PiRational> out;
  for (auto& r : roots) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  return out;
}

// Roots in Q[pi, 1/pi] of a polynomial of degree <= 3; nullopt when a root
// exists but cannot be expressed exactly.
std::optional<std::vector<PiRational>> exact_roots(Polynomial p) {
  std::vector<PiRational> roots;
  // Factor out x while the constant term vanishes.
  while (p.degree() > 0 && p.c[0].is_zero()) {
    roots.emplace_back();
    p.c = {p.c[1], p.c[2], p.c[3], PiRational{}};
  }
  switch (p.degree()) {
    case 0:
      break;
    case 1: {
      auto q = (-p.c[0]).divide(p.c[1]);
      if (!q) return std::nullopt;
      roots.push_back(*q);
      break;
    }
    case 2: {
      const PiRational disc = p.c[1] * p.c[1] - PiRational(4) * p.c[2] * p.c[0];
      auto sq = disc.sqrt();
      if (!sq) {
        // A negative monomial discriminant means no real root at all.
        if (disc.is_monomial() && disc.terms().begin()->second < 0) break;
        return std::nullopt;
      }
      const PiRational denom = PiRational(2) * p.c[2];
      auto r1 = (-p.c[1] + *sq).divide(denom);
      auto r2 = (-p.c[1] - *sq).divide(denom);
      if (!r1 || !r2) return std::nullopt;
      roots.push_back(*r1);
      roots.push_back(*r2);
      break;
    }
    default:
      return std::nullopt;
  }
  return dedupe(std::move(roots));
}

struct Outcome {
  std::vector<Coefficients> solutions;
  std::optional<Error> deepest_error;
  int deepest_order = INT_MIN;
  int branch_order = INT_MIN;

  void fail(ErrorCode code, int order, const std::string& what) {
    if (order >= deepest_order) {
      deepest_order = order;
      deepest_error = Error(code, what);
    }
  }
};

std::string order_text(int tau_order) {
  if (tau_order % 2 == 0) return "s^" + std::to_string(tau_order / 2);
  return "s^(" + std::to_string(tau_order) + "/2)";
}

class SeriesSolver {
 public:
  SeriesSolver(const TranscendentSpec& spec, int target) : spec_(spec), target_(target) {}

  int check_limit(const Coefficients& coeffs) const {
    int limit = INT_MAX;
    const int cap = target_ + kBeyondProbe + kCapMargin;
    const ExactSeries base = exact_residual(spec_, series_from(coeffs, cap), cap);
    for (int k = target_ + 1; k <= target_ + kBeyondProbe; ++k) {
      Coefficients probe = coeffs;
      probe[k] = PiRational(1);
      const ExactSeries diff = exact_residual(spec_, series_from(probe, cap), cap) - base;
      limit = std::min(limit, diff.valuation());
    }
    return limit;
  }

  void run(Coefficients coeffs, std::set<int> unknown, int order, Outcome& out) const {
    const std::string who(name(spec_.id));
    for (;; ++order) {
      if (unknown.empty()) {
        const int limit = check_limit(coeffs);
        for (int o = order; o < limit; ++o) {
          if (!residual_coefficient(spec_, coeffs, o).is_zero()) {
            out.fail(ErrorCode::kInconsistentSeed, o,
                     who + ": residual at tau order " + std::to_string(o) + " (" + order_text(o) +
                         ") cannot be cancelled");
            return;
          }
        }
        out.solutions.push_back(std::move(coeffs));
        return;
      }

      const PiRational base = residual_coefficient(spec_, coeffs, order);
      std::vector<int> deps;
      for (int k : unknown) {
        if (k > order + kProbeWindow) break;
        Coefficients probe = coeffs;
        probe[k] = PiRational(7, 3);
        if (!(residual_coefficient(spec_, probe, order) == base)) deps.push_back(k);
      }

      if (deps.empty()) {
        if (!base.is_zero()) {
          out.fail(ErrorCode::kInconsistentSeed, order,
                   who + ": residual at tau order " + std::to_string(order) + " (" +
                       order_text(order) + ") is " + base.str() +
                       " and no free coefficient can cancel it");
          return;
        }
        continue;
      }
      if (deps.size() > 1) {
        out.fail(ErrorCode::kNonUniqueCoefficient, order,
                 who + ": coefficients of " + order_text(deps[0]) + " and " + order_text(deps[1]) +
                     " enter the same order " + order_text(order));
        return;
      }

      const int k = deps.front();
      Polynomial poly;
      std::array<PiRational, 5> values;
      for (int x = 0; x < 5; ++x) {
        Coefficients probe = coeffs;
        probe[k] = PiRational(x);
        values[x] = residual_coefficient(spec_, probe, order);
      }
      const PiRational d1 = values[1] - values[0];
      const PiRational d2 = values[2] - PiRational(2) * values[1] + values[0];
      const PiRational d3 =
          values[3] - PiRational(3) * values[2] + PiRational(3) * values[1] - values[0];
      poly.c[0] = values[0];
      poly.c[1] = d1 - d2 * PiRational(1, 2) + d3 * PiRational(1, 3);
      poly.c[2] = d2 * PiRational(1, 2) - d3 * PiRational(1, 2);
      poly.c[3] = d3 * PiRational(1, 6);
      const PiRational at4 = poly.c[0] + PiRational(4) * poly.c[1] + PiRational(16) * poly.c[2] +
                             PiRational(64) * poly.c[3];
      if (!(at4 == values[4])) {
        throw Error(ErrorCode::kInvalidArgument, who + ": residual is not cubic in the coefficient");
      }

      auto roots = exact_roots(poly);
      if (!roots) {
        throw Error(ErrorCode::kInvalidArgument,
                    who + ": coefficient of " + order_text(k) + " is not exactly representable");
      }
      if (roots->empty()) {
        out.fail(ErrorCode::kInconsistentSeed, order,
                 who + ": no real coefficient of " + order_text(k) + " cancels order " +
                     order_text(order));
        return;
      }
      unknown.erase(k);
      if (roots->size() == 1) {
        coeffs[k] = roots->front();
        continue;
      }
      out.branch_order = std::max(out.branch_order, order);
      for (const auto& root : *roots) {
        Coefficients branch = coeffs;
        branch[k] = root;
        run(std::move(branch), unknown, order + 1, out);
      }
      return;
    }
  }

  Coefficients solve() const {
    Coefficients seeded;
    const auto& seed = spec_.seed.terms;
    if (seed.empty()) throw Error(ErrorCode::kInvalidArgument, "empty seed");
    for (const auto& t : seed) seeded[t.tau_exponent] = t.coefficient;
    const int lead = seed.front().tau_exponent;
    if (seed.back().tau_exponent > target_) {
      throw Error(ErrorCode::kInvalidArgument, "target order below the largest seed exponent");
    }
    std::set<int> unknown;
    for (int k = lead + 1; k <= target_; ++k) {
      if (!seeded.contains(k)) unknown.insert(k);
    }

    // Start below anything an unknown coefficient could reach.
    const int cap = target_ + kCapMargin;
    Coefficients generic = seeded;
    for (int k : unknown) generic[k] = PiRational(7, 3);
    const int start =
        std::min(residual_valuation(spec_, seeded, cap), residual_valuation(spec_, generic, cap));

    Outcome out;
    run(seeded, unknown, start == INT_MAX ? lead : start, out);
    if (out.solutions.size() == 1) return out.solutions.front();
    if (out.solutions.empty()) {
      if (out.deepest_error) throw *out.deepest_error;
      throw Error(ErrorCode::kInconsistentSeed, std::string(name(spec_.id)));
    }
    throw Error(ErrorCode::kNonUniqueCoefficient,
                std::string(name(spec_.id)) + ": " + std::to_string(out.solutions.size()) +
                    " consistent branches split at " + order_text(out.branch_order));
  }

 private:
  const TranscendentSpec& spec_;
  int target_;
};

// Largest s at which the first neglected orders stay below tolerance * |sigma|.
long double estimate_trust_radius(const std::vector<SeriesTerm>& kept,
                                  const std::vector<SeriesTerm>& neglected,
                                  long double tolerance) {
  if (kept.empty()) return 0;
  if (neglected.empty()) return 1.0L;
  auto ratio = [&](long double s) {
    long double est = 0;
    for (const auto& t : neglected) {
      est += std::fabs(t.value) * std::pow(s, t.tau_exponent / 2.0L);
    }
    long double value = 0;
    for (const auto& t : kept) value += t.value * std::pow(s, t.tau_exponent / 2.0L);
    return est / std::fabs(value);
  };
  long double lo = -60, hi = 0;  // natural-log bracket on s
  if (ratio(std::exp(hi)) <= tolerance) return 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = (lo + hi) / 2;
    (ratio(std::exp(mid)) <= tolerance ? lo : hi) = mid;
  }
  return std::exp(lo);
}

using CacheKey = std::tuple<const TranscendentSpec*, int>;

const Coefficients& cached_solution(const TranscendentSpec& spec, int target) {
  static std::mutex mutex;
  static std::map<CacheKey, Coefficients> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({&spec, target});
    if (it != cache.end()) return it->second;
  }
  Coefficients solved = SeriesSolver(spec, target).solve();
  std::lock_guard lock(mutex);
  return cache.try_emplace({&spec, target}, std::move(solved)).first->second;
}

}  // namespace

PiRational SeriesExpansion::coefficient(int tau_exponent) const {
  for (const auto& t : terms) {
    if (t.tau_exponent == tau_exponent) return t.exact;
  }
  return {};
}

ExactSeries exact_residual(const TranscendentSpec& spec, const ExactSeries& sigma, int cap) {
  ExactSeries y(cap), dy(cap), ddy(cap);
  for (const auto& [k, c] : sigma.terms()) {
    y.set(k, c);
    PiRational first = c;
    first *= Rational(k, 2);
    dy.set(k - 2, first);
    PiRational second = c;
    second *= Rational(k, 2) * (Rational(k, 2) - 1);
    ddy.set(k - 4, second);
  }
  const ExactSeries s = ExactSeries::monomial(PiRational(1), 2, cap);
  return residual_expr<ExactSeries>(spec, s, y, dy, ddy);
}

SeriesExpansion extend_series(const TranscendentSpec& spec, int target_order_tau,
                              long double tolerance) {
  if (target_order_tau < 1) {
    throw Error(ErrorCode::kInvalidArgument, "series order must be positive");
  }
  const Coefficients& coeffs = cached_solution(spec, target_order_tau + kEstimateOrders);
  SeriesExpansion out;
  out.id = spec.id;
  out.order_tau = target_order_tau;
  out.tolerance = tolerance;
  std::vector<SeriesTerm> neglected;
  for (const auto& [k, c] : coeffs) {
    if (c.is_zero()) continue;
    (k <= target_order_tau ? out.terms : neglected).push_back({k, c, c.to_long_double()});
  }
  out.trust_radius = estimate_trust_radius(out.terms, neglected, tolerance);
  return out;
}

SeriesValue eval_series_unchecked(const SeriesExpansion& series, long double s) {
  const long double tau = std::sqrt(s);
  SeriesValue v{0, 0, 0};
  for (const auto& t : series.terms) {
    const long double e = t.tau_exponent / 2.0L;
    const long double p = std::pow(tau, static_cast<long double>(t.tau_exponent));
    v.value += t.value * p;
    v.first += t.value * e * p / s;
    v.second += t.value * e * (e - 1) * p / (s * s);
  }
  return v;
}

SeriesValue eval_series(const SeriesExpansion& series, long double s) {
  if (!(s > 0) || s > series.trust_radius) {
    throw Error(ErrorCode::kOutOfTrustRadius,
                "s = " + std::to_string(static_cast<double>(s)) + " outside (0, " +
                    std::to_string(static_cast<double>(series.trust_radius)) + "]");
  }
  return eval_series_unchecked(series, s);
}

long double series_integral_term_unchecked(const SeriesExpansion& series, long double x) {
  const long double tau = std::sqrt(x);
  long double sum = 0;
  for (const auto& t : series.terms) {
    sum += t.value * 2 / t.tau_exponent * std::pow(tau, static_cast<long double>(t.tau_exponent));
  }
  return sum;
}

long double series_integral_term(const SeriesExpansion& series, long double x) {
  if (!(x > 0) || x > series.trust_radius) {
    throw Error(ErrorCode::kOutOfTrustRadius,
                "x = " + std::to_string(static_cast<double>(x)) + " outside the trust radius");
  }
  return series_integral_term_unchecked(series, x);
}

ExactSeries to_exact_series(const SeriesExpansion& series, int cap) {
  ExactSeries out(cap);
  for (const auto& t : series.terms) out.set(t.tau_exponent, t.exact);
  return out;
}

int residual_check_limit(const TranscendentSpec& spec, const SeriesExpansion& series) {
  Coefficients coeffs;
  for (const auto& t : series.terms) coeffs[t.tau_exponent] = t.exact;
  return SeriesSolver(spec, series.order_tau).check_limit(coeffs);
}

}  // namespace spacing

namespace spacing {

SeriesConsistency series_self_consistency(const TranscendentSpec& spec,
                                          const SeriesExpansion& series, long double s_lo,
                                          long double s_hi, int points) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  if (!(s_lo > 0 && s_hi > s_lo) || points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < s_lo < s_hi and at least two points");
  }
  int top = 0;
  for (const auto& t : series.terms) top = std::max(top, t.tau_exponent);
  // Every product in the residual stays below this, so nothing is truncated.
  const int cap = 4 * std::max(top, 2) + 8;
  const ExactSeries r = exact_residual(spec, to_exact_series(series), cap);

  SeriesConsistency out{};
  out.id = spec.id;
  out.series_order = series.order();
  out.order = (residual_check_limit(spec, series) - 1) / 2.0L;
  out.residual_order = r.valuation() == INT_MAX ? INFINITY : r.valuation() / 2.0L;
  std::vector<std::pair<int, Big>> coeffs;
  for (const auto& [k, c] : r.terms()) coeffs.emplace_back(k, c.to_bin_float());

  long double ratio_at_largest = 0;
  for (int i = 0; i < points; ++i) {
    const long double s =
        s_lo * std::pow(s_hi / s_lo, static_cast<long double>(i) / (points - 1));
    const Big root = boost::multiprecision::sqrt(Big(s));
    Big value = 0;
    for (const auto& [k, c] : coeffs) value += c * boost::multiprecision::pow(root, k);
    const long double ratio =
        static_cast<long double>(boost::multiprecision::abs(value) /
                                 boost::multiprecision::pow(Big(s), Big(out.order)));
    if (i == 0) out.ratio_at_smallest = ratio;
    if (i == points - 1) ratio_at_largest = ratio;
    if (ratio >= out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_s = s;
    }
  }
  out.passed = out.residual_order > out.order && out.ratio_at_smallest <= ratio_at_largest;
  return out;
}

std::vector<ReadingVerdict> resolve_tilde_b_plus_reading() {
  std::vector<ReadingVerdict> out;
  for (TildeBPlusReading reading : {TildeBPlusReading::kPrimed, TildeBPlusReading::kAsPrinted}) {
    try {
      extend_series(lookup(TranscendentId::kTildeSigmaBPlus, reading));
      out.push_back({reading, true, ""});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInconsistentSeed && e.code() != ErrorCode::kNonUniqueCoefficient) {
        throw;
      }
      out.push_back({reading, false, e.what()});
    }
  }
  return out;
}

}  // namespace spacing
