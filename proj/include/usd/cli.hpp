#pragma once

// Command implementations behind the `usd` executable. Each command renders
// its full output as a string so it can be tested without a process boundary.

#include <cstdint>
#include <optional>
#include <string>

namespace usd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerification = 3;

inline constexpr std::uint64_t kDefaultSeed = 20010529;
inline constexpr int kSchemaVersion = 1;

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;  ///< bounds | lifted-curve | trine-table | simulate | witness | verify-povm
  std::uint64_t n = 3;
  int copies = 2;
  int dim = 2;
  int grid = 201;
  int c_max = 12;
  std::uint64_t trials = 1'000'000;
  std::string strategy = "collective";  ///< collective | pairwise
  std::string kind = "achieve";         ///< achieve | depend
  double p = 0.75;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-10;
  unsigned threads = 0;
  std::optional<std::string> out;
  std::optional<Format> format;  ///< per-command default when unset
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;  ///< document written to --out or stdout
  std::string error;   ///< diagnostic for stderr
};

CommandResult cmd_bounds(const RunConfig& cfg);
CommandResult cmd_lifted_curve(const RunConfig& cfg);
CommandResult cmd_trine_table(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_witness(const RunConfig& cfg);
CommandResult cmd_verify_povm(const RunConfig& cfg);

/// Dispatches on cfg.command, mapping validation errors to exit code 2.
CommandResult run(const RunConfig& cfg);

/// Writes result.output to cfg.out (or returns false if the file cannot be
/// written); with no --out the caller prints it.
bool write_output(const RunConfig& cfg, const CommandResult& result);

/// 17 significant digits.
std::string format_double(double x);

}  // namespace usd::cli
