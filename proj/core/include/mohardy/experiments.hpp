#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mohardy/config.hpp"

namespace mohardy {

struct ExperimentInfo {
  std::string name;
  std::string description;
};

/// The fixed registry, in listing order.
const std::vector<ExperimentInfo>& experiment_registry();

/// One line per experiment: name, two spaces, description.
std::string list_experiments();

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentOutcome {
  std::string experiment;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> files;
  bool passed() const;
};

/// Runs the configured experiment and writes its tables into cfg.out
/// (created if missing). Throws ConfigError for an unknown experiment.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Exit codes of the command line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAssertionFailed = 2;

/// Loads the config, applies the overrides, runs and reports the checks on
/// `log`. Returns one of the exit codes above.
int run_from_file(const std::filesystem::path& config_path,
                  const std::optional<std::filesystem::path>& out_override,
                  const std::optional<std::uint64_t>& seed_override, std::ostream& log);

}  // namespace mohardy
