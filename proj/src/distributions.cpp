#include "spacing/distributions.hpp"

#include "spacing/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <cstring>
#include <exception>
#include <thread>

namespace spacing {

namespace {

constexpr long double kPi = boost::math::constants::pi<long double>();

std::size_t index(TranscendentId id) { return static_cast<std::size_t>(id); }

void check_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be 1, 2 or 4, got " + std::to_string(beta));
  }
}

// Argument each transcendent has to reach for spacings up to s_max.
long double argument_end(const TranscendentSpec& spec, long double s_max) {
  if (spec.argument_map == ArgumentMap::kPiS) return kPi * s_max;
  return (kPi * s_max / 2) * (kPi * s_max / 2);
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned worker_count(std::size_t work) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(work, 1)));
}

}  // namespace

SpacingModel::SpacingModel(const ModelOptions& options) : options_(options) {
  if (!(options.s_max > 0)) throw Error(ErrorCode::kInvalidArgument, "s_max must be positive");
  std::array<std::exception_ptr, 6> failures;
  {
    std::vector<std::jthread> workers;
    for (TranscendentId id : kAllTranscendents) {
      workers.emplace_back([this, id, &failures] {
        try {
          const TranscendentSpec& spec = lookup(id);
          const SeriesExpansion series = extend_series(spec);
          trajectories_[index(id)] = std::make_unique<SolutionTrajectory>(
              integrate(spec, series, argument_end(spec, options_.s_max), options_.integration));
        } catch (...) {
          failures[index(id)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

const SolutionTrajectory& SpacingModel::trajectory(TranscendentId id) const {
  return *trajectories_[index(id)];
}

long double SpacingModel::coverage(int beta) const {
  check_beta(beta);
  return beta == 4 ? options_.s_max / 2 : options_.s_max;
}

void SpacingModel::check_range(int beta, long double s) const {
  check_beta(beta);
  if (!(s >= 0)) throw Error(ErrorCode::kInvalidArgument, "s must be nonnegative");
  // Small slack so that a grid point landing on the boundary is accepted.
  if (s > coverage(beta) * (1 + 1e-15L)) {
    throw Error(ErrorCode::kRangeExceeded, "s = " + std::to_string(static_cast<double>(s)) +
                                               " beyond coverage " +
                                               std::to_string(static_cast<double>(coverage(beta))) +
                                               " for beta = " + std::to_string(beta));
  }
}

SpacingModel::Channel SpacingModel::channel(TranscendentId id, long double s) const {
  if (s == 0) return {0, 0};
  const SolutionTrajectory& tr = trajectory(id);
  const long double x = std::min(map_argument(tr.spec().argument_map, s), tr.end());
  const DenseValue v = tr.at(x);
  return {tr.spec().integral_sign * v.integral, v.sigma};
}

long double SpacingModel::gap_probability(int beta, long double s) const {
  check_range(beta, s);
  if (s == 0) return 1;
  switch (beta) {
    case 2:
      return std::exp(channel(TranscendentId::kSigmaPV, s).integral);
    case 1:
      return std::exp(channel(TranscendentId::kSigmaB, s).integral);
    default:
      // sigma_B is tabulated in (pi s / 2)^2, so (pi s)^2 is its value at 2s.
      return (std::exp(channel(TranscendentId::kSigmaB, 2 * s).integral) +
              std::exp(channel(TranscendentId::kSigmaBPlus, s).integral)) /
             2;
  }
}

long double SpacingModel::gap_derivative(int beta, long double s) const {
  check_range(beta, s);
  switch (beta) {
    case 2:
      return -std::exp(channel(TranscendentId::kTildeSigma, s).integral);
    case 1:
      return -std::exp(channel(TranscendentId::kTildeSigmaB, s).integral);
    default:
      return -std::exp(channel(TranscendentId::kTildeSigmaB, 2 * s).integral) -
             kPi * kPi * s * s / 3 * std::exp(channel(TranscendentId::kTildeSigmaBPlus, s).integral);
  }
}

long double SpacingModel::spacing_density(int beta, long double s) const {
  check_range(beta, s);
  if (s == 0) return 0;
  switch (beta) {
    case 2: {
      const Channel c = channel(TranscendentId::kTildeSigma, s);
      return -c.value / s * std::exp(c.integral);
    }
    case 1: {
      const Channel c = channel(TranscendentId::kTildeSigmaB, s);
      return 2 * c.value / s * std::exp(c.integral);
    }
    default: {
      const Channel b = channel(TranscendentId::kTildeSigmaB, 2 * s);
      const Channel bp = channel(TranscendentId::kTildeSigmaBPlus, s);
      return 2 * (2 * b.value / (2 * s) * std::exp(b.integral)) +
             2 * kPi * kPi * s / 3 * (bp.value - 1) * std::exp(bp.integral);
    }
  }
}

long double SpacingModel::e1_from_e2_crosscheck(long double s) const {
  check_range(1, s);
  if (s == 0) return 1;
  const SolutionTrajectory& tr = trajectory(TranscendentId::kSigmaPV);
  const auto& terms = tr.series().terms;
  const long double seed = tr.start();
  // sqrt(sigma - x sigma') / x. The linear term of sigma cancels in
  // sigma - x sigma', so near 0 it is summed from the series directly.
  auto integrand = [&](long double x) -> long double {
    long double minus_d;
    if (x <= seed) {
      if (x == 0) return 1 / kPi;
      minus_d = 0;
      for (const SeriesTerm& t : terms) {
        minus_d += t.value * (1 - t.tau_exponent / 2.0L) * std::pow(x, t.tau_exponent / 2.0L);
      }
    } else {
      const DenseValue v = tr.at(x);
      minus_d = v.sigma - x * v.first;
    }
    if (minus_d < 0) {
      throw Error(ErrorCode::kNegativeIntegrand,
                  "-d/dx(sigma/x) < 0 at x = " + std::to_string(static_cast<double>(x)));
    }
    return std::sqrt(minus_d) / x;
  };
  const long double integral =
      boost::math::quadrature::gauss_kronrod<long double, 31>::integrate(integrand, 0.0L, kPi * s,
                                                                          12, 1e-15L);
  return std::sqrt(gap_probability(2, s)) * std::exp(-integral / 2);
}

long double SpacingModel::e4_from_e1_e2_crosscheck(long double s) const {
  check_range(1, s);
  const long double e1 = gap_probability(1, s);
  return (e1 + gap_probability(2, s) / e1) / 2;
}

IdentityCheck SpacingModel::derivative_identity_check(Identity which, long double s) const {
  constexpr long double h = 1e-4L;
  const int beta = which == Identity::kA1 ? 2 : 1;
  check_range(beta, s);
  if (s < 2 * h) {
    throw Error(ErrorCode::kInvalidArgument, "s too close to 0 for the centred stencil");
  }
  check_range(beta, s + 2 * h);
  auto e = [&](long double t) { return gap_probability(beta, t); };
  const long double lhs = (-e(s + 2 * h) + 8 * e(s + h) - 8 * e(s - h) + e(s - 2 * h)) / (12 * h);
  return {lhs, gap_derivative(beta, s)};
}

SpacingTable SpacingModel::tabulate(int beta, long double s_max, long double step) const {
  check_beta(beta);
  if (!(step > 0)) throw Error(ErrorCode::kInvalidArgument, "step must be positive");
  if (!(s_max > step)) throw Error(ErrorCode::kInvalidArgument, "s_max must exceed step");
  const long n = static_cast<long>(std::floor(s_max / step + 0.5L));
  const long double cov = coverage(beta);

  SpacingTable table;
  table.beta = beta;
  table.rows.resize(static_cast<std::size_t>(n) + 1);
  const long double e_tail = gap_probability(beta, cov);

  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      SpacingRow& r = table.rows[i];
      r.s = static_cast<long double>(i) * step;
      if (r.s > cov * (1 + 1e-15L)) {
        r.E = e_tail;
        r.p = 0;
      } else {
        r.E = gap_probability(beta, r.s);
        r.p = spacing_density(beta, r.s);
      }
      r.surmise = wigner_surmise(beta, r.s);
      r.deviation = r.p - r.surmise;
    }
  };
  const std::size_t total = table.rows.size();
  const unsigned workers = worker_count(total / 64);
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t block = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * block, hi = std::min(total, lo + block);
      pool.emplace_back([&, w, lo, hi] {
        try {
          fill(lo, hi);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  TableMetadata& meta = table.metadata;
  meta.rel_tol = options_.integration.rel_tol;
  meta.abs_tol = options_.integration.abs_tol;
  meta.coverage = cov;
  meta.tail_truncated = table.rows.back().s > cov * (1 + 1e-15L);
  for (TranscendentId id : kAllTranscendents) {
    meta.trajectory_hashes[std::string(name(id))] = trajectory_hash(id);
  }
  meta.generated_at = iso_timestamp();
  return table;
}

std::string SpacingModel::trajectory_hash(TranscendentId id) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](long double v) {
    const double d = static_cast<double>(v);
    unsigned char bytes[sizeof d];
    std::memcpy(bytes, &d, sizeof d);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const TrajectoryNode& n : trajectory(id).nodes()) {
    feed(n.s);
    feed(n.sigma);
    feed(n.first);
    feed(n.integral);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

long double wigner_surmise(long double s) {
  if (s <= 0) return 0;
  return kPi * s / 2 * std::exp(-kPi * s * s / 4);
}

long double wigner_surmise(int beta, long double s) {
  check_beta(beta);
  if (s <= 0) return 0;
  switch (beta) {
    case 1:
      return wigner_surmise(s);
    case 2:
      return 32 / (kPi * kPi) * s * s * std::exp(-4 * s * s / kPi);
    default: {
      const long double c = 262144.0L / (729 * kPi * kPi * kPi);
      return c * std::pow(s, 4) * std::exp(-64 * s * s / (9 * kPi));
    }
  }
}

DeviationResult surmise_deviation(const SpacingModel& model, DeviationMetric metric,
                                  long double step) {
  constexpr long double kRange = 6;
  if (model.coverage(1) < kRange) {
    throw Error(ErrorCode::kRangeExceeded, "surmise comparison needs p_1 on [0, 6]");
  }
  return surmise_deviation([&](long double s) { return model.spacing_density(1, s); },
                           [](long double s) { return wigner_surmise(s); }, metric, kRange, step);
}

long double integrate_rows(const std::vector<SpacingRow>& rows, bool first_moment) {
  if (rows.size() < 2) return 0;
  auto f = [&](std::size_t i) { return first_moment ? rows[i].s * rows[i].p : rows[i].p; };
  const long double h = rows[1].s - rows[0].s;
  const std::size_t panels = rows.size() - 1;
  const std::size_t even = panels - panels % 2;
  long double sum = 0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) sum += h / 3 * (f(i) + 4 * f(i + 1) + f(i + 2));
  if (even < panels) sum += h / 2 * (f(even) + f(even + 1));
  return sum;
}

std::string format_number(long double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
  return buf;
}

std::string to_csv(const SpacingTable& table) {
  std::string out = "s,E,p,surmise,deviation\n";
  for (const SpacingRow& r : table.rows) {
    out += format_number(r.s) + ',' + format_number(r.E) + ',' + format_number(r.p) + ',' +
           format_number(r.surmise) + ',' + format_number(r.deviation) + '\n';
  }
  return out;
}

std::string to_json(const SpacingTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SpacingRow& r : table.rows) {
    rows.push_back({{"s", static_cast<double>(r.s)},
                    {"E", static_cast<double>(r.E)},
                    {"p", static_cast<double>(r.p)},
                    {"surmise", static_cast<double>(r.surmise)},
                    {"deviation", static_cast<double>(r.deviation)}});
  }
  const TableMetadata& m = table.metadata;
  nlohmann::json doc = {
      {"beta", table.beta},
      {"rows", rows},
      {"metadata",
       {{"tolerances", {{"rel_tol", static_cast<double>(m.rel_tol)},
                        {"abs_tol", static_cast<double>(m.abs_tol)}}},
        {"coverage", static_cast<double>(m.coverage)},
        {"tail_truncated", m.tail_truncated},
        {"trajectory_hashes", m.trajectory_hashes},
        {"generated_at", m.generated_at}}}};
  return doc.dump(2) + '\n';
}

}  // namespace spacing
