#pragma once

#include <optional>
#include <span>
#include <vector>

#include "drlsched/environment.hpp"

namespace drlsched {

/// Outcome of one episode, however it was driven.
struct EpisodeSummary {
  /// Finished jobs, then jobs still in the system at truncation.
  std::vector<double> slowdowns;
  int jobs_finished = 0;
  int jobs_truncated = 0;  ///< counted with finish = max(truncation time, arrival + T)
  int jobs_dropped = 0;    ///< excluded from slowdowns
  double total_reward = 0.0;
  int decisions = 0;
  int timesteps = 0;

  std::optional<double> mean_slowdown() const;
};

EpisodeSummary summarize_episode(const Environment& env, double total_reward, int decisions);

struct EvalSummary {
  std::optional<double> mean_slowdown;  ///< mean of per-episode means; absent if no job was served
  double std_slowdown = 0.0;            ///< population std of per-episode means
  double mean_reward = 0.0;
  int jobs_dropped = 0;
  int jobs_truncated = 0;
  int episodes = 0;
};

EvalSummary aggregate(std::span<const EpisodeSummary> episodes);

}  // namespace drlsched
