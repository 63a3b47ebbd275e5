#ifndef SPACING_CLI_HPP
#define SPACING_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace spacing {

enum class Command { kTabulate, kVerify, kSurmise, kMc, kOracleCompare };
enum class Suite { kIdentities, kSeries, kOde, kOracle };
enum class OutputFormat { kCsv, kJson };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory used when no output path is given.
inline constexpr const char* kOutputDirVariable = "SPACING_OUTPUT_DIR";

struct RunConfig {
  Command command = Command::kTabulate;
  std::optional<int> beta;
  long double s_max = 5;
  long double step = 0.01L;
  long double rel_tol = 1e-12L;
  OutputFormat format = OutputFormat::kCsv;
  std::optional<std::string> output_path;  // "-" is standard output
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;  // matrices for mc
  int dimension = 200;                 // matrix size for mc
  Suite suite = Suite::kIdentities;
  std::optional<long double> tol;      // overrides every tolerance of a suite
};

/// kInvalidArgument with an actionable message when the config is unusable.
void validate(const RunConfig& config);

/// Where output goes: the explicit path, else $SPACING_OUTPUT_DIR/<default
/// name>, else nullopt for standard output.
std::optional<std::filesystem::path> resolve_output(const RunConfig& config);

/// Runs one command. Data goes to the resolved output, reports and
/// diagnostics to `err`. Returns kExitOk, kExitVerificationFailed (a check
/// outside tolerance or a numerical failure) or kExitUsage.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string_view command_name(Command c);

}  // namespace spacing

#endif  // SPACING_CLI_HPP
