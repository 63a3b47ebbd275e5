#include "spacing/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  using spacing::Command;
  spacing::RunConfig config;
  CLI::App app{"Level-spacing distributions of the Gaussian random matrix ensembles"};
  app.require_subcommand(1);

  const std::map<std::string, spacing::OutputFormat> formats{{"csv", spacing::OutputFormat::kCsv},
                                                            {"json", spacing::OutputFormat::kJson}};
  const std::map<std::string, spacing::Suite> suites{{"identities", spacing::Suite::kIdentities},
                                                     {"series", spacing::Suite::kSeries},
                                                     {"ode", spacing::Suite::kOde},
                                                     {"oracle", spacing::Suite::kOracle}};
  int beta = 0;
  double s_max = 5, step = 0.01, rel_tol = 1e-12, tol = 0;
  std::string output;
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  auto common = [&](CLI::App* sub, bool with_beta) {
    if (with_beta) sub->add_option("--beta", beta, "symmetry index")->check(CLI::IsMember({1, 2, 4}));
    sub->add_option("--rel-tol", rel_tol, "target accuracy of the trajectories")
        ->check(CLI::Range(1e-13, 1e-6));
    sub->add_option("--format", config.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("-o,--output", output, "output file ('-' for standard output)");
  };

  auto* tabulate = app.add_subcommand("tabulate", "E and p on a uniform grid");
  common(tabulate, true);
  tabulate->add_option("--s-max", s_max, "last grid point")->check(CLI::PositiveNumber);
  tabulate->add_option("--step", step, "grid spacing")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("--suite", config.suite, "identities, series, ode or oracle")
      ->transform(CLI::CheckedTransformer(suites, CLI::ignore_case));
  verify->add_option("--tol", tol, "tolerance for every check of the suite")
      ->check(CLI::PositiveNumber);

  auto* surmise = app.add_subcommand("surmise", "deviation of the Wigner surmise from p_1");
  common(surmise, false);

  auto* mc = app.add_subcommand("mc", "Monte-Carlo spacings of tridiagonal ensembles");
  common(mc, true);
  mc->add_option("--seed", seed, "base seed");
  mc->add_option("--samples", samples, "number of matrices")->check(CLI::PositiveNumber);
  mc->add_option("--n", config.dimension, "matrix dimension")->check(CLI::Range(8, 100000));

  auto* oracle = app.add_subcommand("oracle-compare", "E_2 against the Fredholm determinant");
  common(oracle, false);
  oracle->add_option("--s-max", s_max, "last grid point")->check(CLI::PositiveNumber);
  oracle->add_option("--step", step, "grid spacing")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? spacing::kExitOk : spacing::kExitUsage;
  }

  if (tabulate->parsed()) config.command = Command::kTabulate;
  if (verify->parsed()) config.command = Command::kVerify;
  if (surmise->parsed()) config.command = Command::kSurmise;
  if (mc->parsed()) config.command = Command::kMc;
  if (oracle->parsed()) config.command = Command::kOracleCompare;
  if (beta != 0) config.beta = beta;
  config.s_max = s_max;
  config.step = step;
  config.rel_tol = rel_tol;
  if (tol > 0) config.tol = tol;
  if (!output.empty()) config.output_path = output;
  if (mc->count("--seed") > 0) config.seed = seed;
  if (samples > 0) config.samples = samples;
  return spacing::run(config, std::cout, std::cerr);
}
