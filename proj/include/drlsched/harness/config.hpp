#pragma once

#include <filesystem>
#include <string>

#include "drlsched/environment.hpp"
#include "drlsched/policy.hpp"
#include "drlsched/trainer.hpp"
#include "drlsched/workload.hpp"

namespace drlsched::harness {

struct ExperimentConfig {
  EnvConfig env;
  WorkloadParams workload;
  NetConfig net;
  TrainConfig train;
  int eval_jobsets = 50;          ///< held-out jobsets for periodic and final evaluation
  bool record_wall_time = true;   ///< false writes 0 so metrics files are reproducible byte for byte
  std::filesystem::path output_dir = "out";

  /// Cross-field checks: observation shape vs net input, action count, horizon
  /// vs longest job, resource counts. Throws ConfigError naming both fields.
  void validate() const;
};

/// Flat `section.key = value` lines; `#` starts a comment. Keys not set keep
/// their defaults; net.input_rows / input_cols / num_actions default to the
/// values implied by env.* and are verified when given.
/// Throws ParseError (line + key) or ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Renders every key, in the same format parse_config reads.
std::string format_config(const ExperimentConfig& config);

}  // namespace drlsched::harness
