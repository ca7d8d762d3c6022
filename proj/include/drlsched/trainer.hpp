#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "drlsched/environment.hpp"
#include "drlsched/metrics.hpp"
#include "drlsched/policy.hpp"
#include "drlsched/workload.hpp"

namespace drlsched {

struct TrainConfig {
  int num_iterations = 100;
  int jobsets_per_iteration = 10;
  int episodes_per_jobset = 20;
  double discount = 1.0;
  int max_episode_length = 1000;  ///< agent decisions per rollout
  int eval_every = 10;
  std::uint64_t seed = 1;
  int threads = 1;  ///< rollout workers; results do not depend on it

  /// Throws ConfigError.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

/// One episode. Every agent decision is a step, including zero-reward
/// scheduling decisions.
struct Trajectory {
  std::vector<Observation> observations;
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<double> returns;
  int jobset_id = 0;
  EpisodeSummary summary;

  std::size_t size() const { return actions.size(); }
};

/// Samples actions from the policy until the episode ends or `max_len`
/// decisions were taken. Returns are left empty.
Trajectory rollout(const EnvConfig& env_config, const JobSet& jobset, const PolicyParams& params, Rng& rng,
                   int max_len);

/// return_t = sum_{s >= t} discount^(s-t) reward_s
std::vector<double> compute_returns(std::span<const double> rewards, double discount);

/// Per-decision-index mean return over the trajectories that reach that index.
/// Trajectories must have their returns filled.
std::vector<double> compute_baseline(std::span<const Trajectory> trajectories);

/// advantage_t = return_t - baseline_t, one vector per trajectory.
std::vector<std::vector<double>> compute_advantages(std::span<const Trajectory> trajectories);

struct IterationReport {
  std::uint64_t iteration = 0;  ///< 1-based: the update this report belongs to
  double mean_total_reward = 0.0;  ///< mean discounted return from t = 0
  std::optional<double> mean_slowdown;
  double mean_episode_length = 0.0;  ///< decisions
  double wall_time = 0.0;            ///< seconds
  int truncated_jobs = 0;
  int dropped_jobs = 0;
};

/// One REINFORCE iteration: episodes_per_jobset rollouts per jobset, per-jobset
/// time-indexed baselines, gradient summed over every step and scaled by
/// 1 / total steps, then one RMSprop update. params.iteration selects the
/// rollout rng streams and is incremented.
IterationReport train_iteration(PolicyParams& params, std::span<const JobSet> jobsets, const EnvConfig& env_config,
                                const TrainConfig& config);

/// Runs the policy greedily (argmax) on one jobset.
EpisodeSummary run_greedy_episode(const PolicyParams& params, const JobSet& jobset, const EnvConfig& env_config,
                                  int max_len);

/// Greedy evaluation averaged over jobsets.
EvalSummary evaluate(const PolicyParams& params, std::span<const JobSet> jobsets, const EnvConfig& env_config,
                     int max_len);

/// Runs fn(0..n-1) on up to `threads` workers. Exceptions are rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace drlsched
