#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drlsched/harness/config.hpp"
#include "drlsched/metrics.hpp"

namespace drlsched::harness {

inline constexpr const char* kMetricsHeader = "iteration,mean_total_reward,mean_slowdown,mean_episode_length,wall_time";
inline constexpr const char* kComparisonHeader = "scheduler,mean_slowdown,std_slowdown,mean_reward,jobs_dropped";

/// Jobsets drawn from the workload: training jobsets are keyed by (iteration, k),
/// held-out jobsets by k alone, on disjoint seed streams.
std::vector<JobSet> training_jobsets(const WorkloadParams& workload, std::uint64_t iteration, int count);
std::vector<JobSet> heldout_jobsets(const WorkloadParams& workload, int count);

/// Writes jobset_0000.txt ... into out_dir. Returns the paths written.
std::vector<std::filesystem::path> cmd_generate(const WorkloadParams& workload, int count,
                                                const std::filesystem::path& out_dir);

struct TrainOptions {
  std::optional<int> iterations;                    ///< overrides train.num_iterations
  bool resume = false;                              ///< continue from a checkpoint
  std::optional<std::filesystem::path> checkpoint;  ///< default <out>/latest.ckpt
  bool final_report = true;
};

/// Trains for train.num_iterations updates in total. Writes
///   metrics.csv          one row per iteration
///   eval.csv             held-out greedy evaluation every eval_every iterations
///   latest.ckpt          after every iteration
///   checkpoint_NNNN.ckpt every eval_every iterations
///   final_report.csv     comparison table against the heuristics
/// Returns 0 on success.
int cmd_train(const ExperimentConfig& config, const TrainOptions& options, std::ostream& log);

struct ComparisonRow {
  std::string scheduler;
  EvalSummary summary;
};

/// Evaluates the policy greedily and the heuristics (sjf, packer, random) plus
/// the uniform random policy on the same held-out jobsets.
std::vector<ComparisonRow> compare(const ExperimentConfig& config, const PolicyParams& params,
                                   const std::vector<JobSet>& jobsets);
std::string format_comparison_csv(const std::vector<ComparisonRow>& rows);
std::string format_comparison_text(const std::vector<ComparisonRow>& rows);

/// Loads the checkpoint (ShapeError on mismatch), evaluates on num_jobsets
/// held-out jobsets, writes <out>/comparison.csv and prints a summary.
int cmd_compare(const ExperimentConfig& config, const std::filesystem::path& checkpoint, int num_jobsets,
                std::ostream& log);

/// Greedy evaluation only; writes <out>/evaluation.csv.
int cmd_evaluate(const ExperimentConfig& config, const std::filesystem::path& checkpoint, int num_jobsets,
                 std::ostream& log);

}  // namespace drlsched::harness
