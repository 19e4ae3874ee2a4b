#pragma once

#include "foldlab/cli/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace foldlab::cli {

/// Command-line overrides; they take precedence over environment and config.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

struct RunResult {
  int exit_code = 0;
  std::string verdict;  // empty when the experiment has no verdict
  std::string out_dir;
  std::vector<std::string> files;
  std::string summary;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_verdict_fail = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_numeric = 3;

/// Exit status for a library error: 2 for config and input problems, 3 for numerical failures.
int exit_code_for(const Error& e);

/// Output directory: override, then FOLDLAB_OUT_DIR, then config output_dir, then out/<name>.
std::string resolve_out_dir(const ExperimentConfig& cfg, const RunOverrides& overrides);
int resolve_workers(const ExperimentConfig& cfg, const RunOverrides& overrides);

/// Runs the experiment and writes report.json, report.csv, trajectory_*.csv,
/// bounces.json and manifest.json. Library errors propagate as foldlab::Error.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOverrides& overrides = {});

struct BuiltinConfig {
  std::string name;
  std::string label;
  std::string file;  // relative to the configs directory
};

const std::vector<BuiltinConfig>& builtin_configs();
void list_builtins(std::ostream& out);

}  // namespace foldlab::cli
