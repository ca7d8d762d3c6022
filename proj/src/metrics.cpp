#include "drlsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace drlsched {

std::optional<double> EpisodeSummary::mean_slowdown() const {
  if (slowdowns.empty()) return std::nullopt;
  return std::accumulate(slowdowns.begin(), slowdowns.end(), 0.0) / static_cast<double>(slowdowns.size());
}

EpisodeSummary summarize_episode(const Environment& env, double total_reward, int decisions) {
  const EnvState& s = env.state();
  EpisodeSummary out;
  out.total_reward = total_reward;
  out.decisions = decisions;
  out.timesteps = s.clock;
  out.jobs_dropped = s.dropped;
  for (const Job& j : s.completed) out.slowdowns.push_back(slowdown(j));
  out.jobs_finished = static_cast<int>(s.completed.size());

  auto truncated = [&](const Job& j) {
    const int finish = std::max(s.clock, j.arrival_time + j.duration);
    out.slowdowns.push_back(static_cast<double>(finish - j.arrival_time) / j.duration);
    ++out.jobs_truncated;
  };
  for (const Job& j : s.running) truncated(j);
  for (const auto& slot : s.queue)
    if (slot) truncated(*slot);
  for (const Job& j : s.backlog) truncated(j);
  return out;
}

EvalSummary aggregate(std::span<const EpisodeSummary> episodes) {
  EvalSummary out;
  out.episodes = static_cast<int>(episodes.size());
  std::vector<double> means;
  double reward = 0.0;
  for (const auto& e : episodes) {
    reward += e.total_reward;
    out.jobs_dropped += e.jobs_dropped;
    out.jobs_truncated += e.jobs_truncated;
    if (auto m = e.mean_slowdown()) means.push_back(*m);
  }
  if (!episodes.empty()) out.mean_reward = reward / static_cast<double>(episodes.size());
  if (!means.empty()) {
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    out.mean_slowdown = mean;
    out.std_slowdown = std::sqrt(var / static_cast<double>(means.size()));
  }
  return out;
}

}  // namespace drlsched
