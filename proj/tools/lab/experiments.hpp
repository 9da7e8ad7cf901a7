#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace rovella::lab {

struct RunRequest {
  std::string experiment;
  Config config;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

struct RunOutcome {
  std::filesystem::path summary;
  std::vector<std::filesystem::path> csv_files;
};

const std::vector<std::string>& experiment_names();

/// Keys accepted for an experiment, with their defaults.
std::vector<KeySpec> experiment_schema(const std::string& experiment);

/// Validates, runs and writes all outputs. Nothing is written unless the run succeeds.
RunOutcome run_experiment(const RunRequest& request);

}  // namespace rovella::lab
