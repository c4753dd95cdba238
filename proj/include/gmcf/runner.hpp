#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmcf/config.hpp"

namespace gmcf {

// Pass thresholds of the run-based acceptance criteria.
namespace thresholds {
inline constexpr double spatial_order = 1.8;
inline constexpr double temporal_order = 0.8;
inline constexpr double residual_order = 0.8;
inline constexpr double gradient_exponent_relative = 0.10;
inline constexpr double inner_slope_relative = 0.05;
inline constexpr double sign_floor = 1e-8;
}  // namespace thresholds

enum ExitCode : int { ExitSuccess = 0, ExitCriterionFailure = 1, ExitConfigError = 2, ExitRuntimeError = 3 };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::string name;
  std::filesystem::path directory;
  int exit_code = ExitSuccess;
  std::vector<CriterionResult> criteria;
  std::vector<std::pair<std::string, std::string>> summary;  // key = value lines
  std::optional<std::string> error;
};

/// $GMCF_OUTPUT_ROOT when set, the current directory otherwise.
std::filesystem::path output_root();

/// Runs the configured pipeline, writes CSVs and summary.txt under `directory`
/// and evaluates the criteria listed in the configuration. Solver and
/// diagnostic errors are recorded in the result (exit code 3), never thrown.
ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& directory);
/// As above, in output_root() / cfg.output.directory.
ExperimentResult run_experiment(const RunConfig& cfg);

struct SuiteResult {
  int exit_code = ExitSuccess;
  int criteria_checked = 0;
  std::vector<ExperimentResult> runs;
  std::vector<std::string> report;  // aggregated lines, in config order
};

/// Runs every *.ini in `dir` (sorted by name), up to `jobs` at a time.
/// Config errors count as exit 2, runtime errors as 3, failed criteria as 1;
/// the suite exits with the highest-priority code seen (2, then 3, then 1), 0 otherwise.
SuiteResult verify_suite(const std::filesystem::path& dir, unsigned jobs = 0);

/// Exit code of a single result: config error and runtime error are sticky.
int combine_exit(int a, int b);

}  // namespace gmcf
