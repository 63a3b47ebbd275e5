#include "spacing/cli.hpp"

#include "spacing/distributions.hpp"
#include "spacing/error.hpp"
#include "spacing/fredholm.hpp"
#include "spacing/painleve_v.hpp"
#include "spacing/rmt.hpp"
#include "spacing/series.hpp"

#include "json.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace spacing {

namespace {

// Spacing range of the trajectories behind every command.
constexpr long double kModelSMax = 8;
constexpr std::size_t kDefaultMatrices = 4100;  // about 2e5 bulk spacings at n = 200
constexpr std::uint64_t kDefaultSeed = 1;

struct Check {
  std::string name;
  long double worst_s = 0;
  long double residual = 0;
  long double tolerance = 0;
  bool passed() const { return residual <= tolerance; }
};

std::vector<long double> grid(long double lo, long double hi, int points) {
  std::vector<long double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

// Keeps the largest residual; a NaN sticks so the check fails.
void track(Check& c, long double s, long double residual) {
  if (std::isnan(c.residual)) return;
  if (std::isnan(residual) || residual >= c.residual) {
    c.residual = residual;
    c.worst_s = s;
  }
}

SpacingModel make_model(const RunConfig& config) {
  ModelOptions options;
  options.s_max = kModelSMax;
  options.integration.rel_tol = config.rel_tol;
  return SpacingModel(options);
}

std::vector<Check> identity_suite(const RunConfig& config) {
  const SpacingModel model = make_model(config);
  const long double tol_a = config.tol.value_or(1e-8L);
  const long double tol_ws4 = config.tol.value_or(1e-6L);
  Check a1{"a1", 0, 0, tol_a}, a2{"a2", 0, 0, tol_a}, ws4{"ws4", 0, 0, tol_ws4},
      ws5{"ws5", 0, 0, tol_a};
  for (long double s : grid(0.1L, 4, 50)) {
    const IdentityCheck c1 = model.derivative_identity_check(Identity::kA1, s);
    track(a1, s, std::fabs(c1.lhs - c1.rhs));
    const IdentityCheck c2 = model.derivative_identity_check(Identity::kA2, s);
    track(a2, s, std::fabs(c2.lhs - c2.rhs));
    track(ws4, s, std::fabs(model.e1_from_e2_crosscheck(s) - model.gap_probability(1, s)));
    track(ws5, s,
          std::fabs(model.e4_from_e1_e2_crosscheck(s) - model.gap_probability(4, s / 2)));
  }
  return {a1, a2, ws4, ws5};
}

std::vector<Check> series_suite(const RunConfig& config) {
  std::vector<Check> out;
  for (TranscendentId id : kAllTranscendents) {
    const TranscendentSpec& spec = lookup(id);
    const SeriesConsistency c = series_self_consistency(spec, extend_series(spec));
    // Residual over s^order at the small end must be below the tolerance and
    // not larger than at the large end.
    Check check{"series_" + std::string(name(id)), 1e-8L, c.ratio_at_smallest,
                config.tol.value_or(1e-6L)};
    if (!c.passed) check.residual = std::max(check.residual, check.tolerance * 2);
    out.push_back(check);
  }
  const auto verdicts = resolve_tilde_b_plus_reading();
  const auto winners = std::count_if(verdicts.begin(), verdicts.end(),
                                     [](const ReadingVerdict& v) { return v.admits_seed; });
  const bool primed = !verdicts.empty() && verdicts.front().admits_seed;
  out.push_back({"tilde_b_plus_reading", 0, winners == 1 && primed ? 0.0L : 1.0L, 0});
  return out;
}

std::vector<Check> ode_suite(const RunConfig& config) {
  const SpacingModel model = make_model(config);
  std::vector<Check> out;
  for (TranscendentId id : kAllTranscendents) {
    const SolutionTrajectory& tr = model.trajectory(id);
    // worst_s is reported in the transcendent's own argument.
    Check c{"residual_" + std::string(name(id)), tr.diagnostics().max_residual_at,
            tr.max_relative_residual(),
            config.tol.value_or(1e-10L)};
    if (!tr.branch_flips().empty()) c.residual = std::max(c.residual, 2 * c.tolerance);
    out.push_back(c);
  }
  constexpr long double kPi = boost::math::constants::pi<long double>();
  const TwoRouteReport r = two_route_tilde(model.trajectory(TranscendentId::kSigmaB),
                                           model.trajectory(TranscendentId::kTildeSigmaB),
                                           (kPi * 0.1L / 2) * (kPi * 0.1L / 2),
                                           (kPi * 6 / 2) * (kPi * 6 / 2), 400);
  out.push_back({"two_route_tilde_sigma_b", 2 * std::sqrt(r.worst_x) / kPi, r.max_diff,
                 config.tol.value_or(1e-8L)});
  return out;
}

std::vector<Check> oracle_suite(const RunConfig& config) {
  const SpacingModel model = make_model(config);
  const auto rows = oracle_compare([&](long double s) { return model.gap_probability(2, s); },
                                   {0.1L, 0.5L, 1, 1.5L, 2, 2.5L, 3});
  Check c{"oracle_e2", 0, 0, config.tol.value_or(1e-10L)};
  for (const auto& r : rows) track(c, r.s, std::fabs(r.diff));
  return {c};
}

std::string render_checks(const std::vector<Check>& checks, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Check& c : checks) {
      arr.push_back({{"check", c.name},
                     {"worst_s", static_cast<double>(c.worst_s)},
                     {"residual", static_cast<double>(c.residual)},
                     {"tolerance", static_cast<double>(c.tolerance)},
                     {"passed", c.passed()}});
    }
    return nlohmann::json{{"checks", arr}}.dump(2) + '\n';
  }
  std::string out = "check,worst_s,residual,tolerance,status\n";
  for (const Check& c : checks) {
    out += c.name + ',' + format_number(c.worst_s) + ',' + format_number(c.residual) + ',' +
           format_number(c.tolerance) + ',' + (c.passed() ? "pass" : "FAIL") + '\n';
  }
  return out;
}

std::string default_name(const RunConfig& config) {
  std::string stem(command_name(config.command));
  if (config.command == Command::kVerify) {
    static const char* suites[] = {"identities", "series", "ode", "oracle"};
    stem += std::string("-") + suites[static_cast<int>(config.suite)];
  }
  if (config.beta) stem += "-beta" + std::to_string(*config.beta);
  return stem + (config.format == OutputFormat::kJson ? ".json" : ".csv");
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  const auto path = resolve_output(config);
  if (!path) {
    out << text;
    return;
  }
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  std::ofstream file(*path, std::ios::binary);
  if (!file) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path->string());
  }
  file << text;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::kTabulate: {
      const SpacingModel model = make_model(config);
      const SpacingTable table = model.tabulate(config.beta.value_or(2), config.s_max, config.step);
      if (table.metadata.tail_truncated) {
        err << "warning: rows beyond s = " << static_cast<double>(table.metadata.coverage)
            << " use p = 0 and E = E(" << static_cast<double>(table.metadata.coverage) << ")\n";
      }
      emit(config, config.format == OutputFormat::kJson ? to_json(table) : to_csv(table), out);
      return kExitOk;
    }
    case Command::kVerify: {
      std::vector<Check> checks;
      switch (config.suite) {
        case Suite::kIdentities: checks = identity_suite(config); break;
        case Suite::kSeries: checks = series_suite(config); break;
        case Suite::kOde: checks = ode_suite(config); break;
        case Suite::kOracle: checks = oracle_suite(config); break;
      }
      emit(config, render_checks(checks, config.format), out);
      bool ok = true;
      for (const Check& c : checks) {
        if (!c.passed()) {
          ok = false;
          err << "FAIL " << c.name << ": residual " << static_cast<double>(c.residual)
              << " at s = " << static_cast<double>(c.worst_s) << " exceeds "
              << static_cast<double>(c.tolerance) << '\n';
        }
      }
      return ok ? kExitOk : kExitVerificationFailed;
    }
    case Command::kSurmise: {
      const SpacingModel model = make_model(config);
      const DeviationResult abs = surmise_deviation(model, DeviationMetric::kMaxAbs);
      const DeviationResult rel = surmise_deviation(model, DeviationMetric::kMaxRelAtPeak);
      std::string text;
      if (config.format == OutputFormat::kJson) {
        text = nlohmann::json{{"max_abs", {{"value", static_cast<double>(abs.value)},
                                           {"s", static_cast<double>(abs.at)}}},
                              {"max_rel_at_peak", {{"value", static_cast<double>(rel.value)},
                                                   {"s", static_cast<double>(rel.at)}}}}
                   .dump(2) +
               '\n';
      } else {
        text = "metric,value,s\nmax_abs," + format_number(abs.value) + ',' +
               format_number(abs.at) + "\nmax_rel_at_peak," + format_number(rel.value) + ',' +
               format_number(rel.at) + '\n';
      }
      emit(config, text, out);
      return kExitOk;
    }
    case Command::kMc: {
      const int beta = config.beta.value_or(2);
      const SpacingModel model = make_model(config);
      const std::uint64_t seed = config.seed.value_or(kDefaultSeed);
      const std::size_t matrices = config.samples.value_or(kDefaultMatrices);
      const auto spacings = sample_bulk_spacings(beta, config.dimension, matrices, seed);
      const double ks = ks_distance(spacings, beta, model);
      const auto bins = histogram(spacings, beta, model, 4, 0.1);
      err << "beta " << beta << ", " << spacings.size() << " spacings, KS distance " << ks << '\n';
      std::string text;
      if (config.format == OutputFormat::kJson) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : bins) {
          arr.push_back({{"bin_left", b.left}, {"bin_right", b.right}, {"count", b.count},
                         {"density", b.density}, {"exact_p", b.exact_p}});
        }
        text = nlohmann::json{{"beta", beta},       {"dimension", config.dimension},
                              {"matrices", matrices}, {"seed", seed},
                              {"spacings", spacings.size()}, {"ks", ks},
                              {"bins", arr}}
                   .dump(2) +
               '\n';
      } else {
        text = histogram_csv(bins);
      }
      emit(config, text, out);
      return kExitOk;
    }
    case Command::kOracleCompare: {
      const SpacingModel model = make_model(config);
      std::vector<long double> g;
      const long n = static_cast<long>(std::floor(config.s_max / config.step + 0.5L));
      for (long i = 0; i <= n; ++i) g.push_back(i * config.step);
      const auto rows =
          oracle_compare([&](long double s) { return model.gap_probability(2, s); }, g);
      std::string text;
      if (config.format == OutputFormat::kJson) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
          arr.push_back({{"s", static_cast<double>(r.s)},
                         {"E2_painleve", static_cast<double>(r.e2_painleve)},
                         {"E2_fredholm", static_cast<double>(r.e2_fredholm)},
                         {"diff", static_cast<double>(r.diff)}});
        }
        text = nlohmann::json{{"rows", arr}}.dump(2) + '\n';
      } else {
        text = oracle_csv(rows);
      }
      emit(config, text, out);
      return kExitOk;
    }
  }
  return kExitUsage;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kTabulate: return "tabulate";
    case Command::kVerify: return "verify";
    case Command::kSurmise: return "surmise";
    case Command::kMc: return "mc";
    case Command::kOracleCompare: return "oracle-compare";
  }
  return "?";
}

void validate(const RunConfig& config) {
  if (config.beta && *config.beta != 1 && *config.beta != 2 && *config.beta != 4) {
    throw Error(ErrorCode::kInvalidArgument, "--beta must be 1, 2 or 4");
  }
  if (!(config.step > 0)) throw Error(ErrorCode::kInvalidArgument, "--step must be positive");
  if (!(config.s_max > 0)) throw Error(ErrorCode::kInvalidArgument, "--s-max must be positive");
  if (!(config.step < config.s_max)) {
    throw Error(ErrorCode::kInvalidArgument, "--step must be smaller than --s-max");
  }
  if (!(config.rel_tol >= kMinRelTol && config.rel_tol <= kMaxRelTol)) {
    throw Error(ErrorCode::kInvalidArgument, "--rel-tol must lie in [1e-13, 1e-6]");
  }
  if (config.tol && !(*config.tol > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "--tol must be positive");
  }
  if (config.samples && *config.samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "--samples must be positive");
  }
  if (config.dimension < 8) throw Error(ErrorCode::kInvalidArgument, "--n must be at least 8");
}

std::optional<std::filesystem::path> resolve_output(const RunConfig& config) {
  if (config.output_path) {
    if (*config.output_path == "-") return std::nullopt;
    return std::filesystem::path(*config.output_path);
  }
  if (const char* dir = std::getenv(kOutputDirVariable); dir && *dir) {
    return std::filesystem::path(dir) / default_name(config);
  }
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run_command(config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kRangeExceeded
               ? kExitUsage
               : kExitVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

}  // namespace spacing
