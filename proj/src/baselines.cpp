#include "drlsched/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "drlsched/errors.hpp"

namespace drlsched {

std::string_view to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::sjf:
      return "sjf";
    case HeuristicKind::packer:
      return "packer";
    case HeuristicKind::random:
      return "random";
  }
  return "?";
}

HeuristicKind heuristic_from_string(std::string_view name) {
  if (name == "sjf") return HeuristicKind::sjf;
  if (name == "packer") return HeuristicKind::packer;
  if (name == "random") return HeuristicKind::random;
  throw ParameterError("unknown heuristic '" + std::string(name) + "'");
}

namespace {

struct Candidate {
  int action;
  int slot;
  int machine;
  int offset;
  const Job* job;
};

std::vector<Candidate> feasible_pairs(const Environment& env) {
  const EnvConfig& c = env.config();
  const EnvState& s = env.state();
  std::vector<Candidate> out;
  for (int m = 0; m < c.num_machines; ++m) {
    for (int j = 0; j < c.queue_length; ++j) {
      const auto& slot = s.queue[j];
      if (!slot) continue;
      if (auto off = earliest_placement(s.grid, m, *slot))
        out.push_back({encode_action({m, j}, c), j, m, *off, &*slot});
    }
  }
  return out;  // ascending action index
}

}  // namespace

int heuristic_action(const Environment& env, HeuristicKind kind, Rng& rng) {
  const auto pairs = feasible_pairs(env);
  if (pairs.empty()) return env.config().void_action();

  switch (kind) {
    case HeuristicKind::sjf: {
      const Candidate* best = &pairs.front();
      for (const Candidate& p : pairs) {
        const auto key = [](const Candidate& c) { return std::tuple(c.job->duration, c.slot, c.offset, c.machine); };
        if (key(p) < key(*best)) best = &p;
      }
      return best->action;
    }
    case HeuristicKind::packer: {
      const EnvState& s = env.state();
      const Candidate* best = nullptr;
      long best_score = -1;
      for (const Candidate& p : pairs) {
        long score = 0;
        for (int r = 0; r < s.grid.resources(); ++r)
          score += static_cast<long>(p.job->demand[r]) * s.grid.free(p.machine, r, 0);
        if (score > best_score) {
          best_score = score;
          best = &p;
        }
      }
      return best->action;
    }
    case HeuristicKind::random:
      return pairs[uniform_int(rng, 0, static_cast<int>(pairs.size()) - 1)].action;
  }
  return env.config().void_action();
}

EpisodeSummary run_heuristic_episode(const EnvConfig& env_config, const JobSet& jobset, HeuristicKind kind,
                                     Rng& rng, int max_len) {
  Environment env(env_config);
  env.reset(jobset);
  double total = 0.0;
  int decisions = 0;
  while (!env.done() && decisions < max_len) {
    total += env.step(heuristic_action(env, kind, rng)).reward;
    ++decisions;
  }
  return summarize_episode(env, total, decisions);
}

EpisodeSummary run_uniform_policy_episode(const EnvConfig& env_config, const JobSet& jobset, Rng& rng,
                                          int max_len) {
  Environment env(env_config);
  env.reset(jobset);
  double total = 0.0;
  int decisions = 0;
  while (!env.done() && decisions < max_len) {
    total += env.step(uniform_int(rng, 0, env_config.void_action())).reward;
    ++decisions;
  }
  return summarize_episode(env, total, decisions);
}

namespace {

// Every active schedule is produced by serial list scheduling (each job at its
// earliest feasible start on its machine, in list order) for some order and
// machine choice, and some active schedule is optimal for any objective that is
// nondecreasing in completion times. Enumerating orders x machines is therefore exact.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const std::vector<Job>& jobs, const EnvConfig& c) : jobs_(jobs), config_(c) {
    int latest = 0;
    for (const Job& j : jobs) latest = std::max(latest, j.arrival_time);
    horizon_ = latest + std::accumulate(jobs.begin(), jobs.end(), 0, [](int a, const Job& j) { return a + j.duration; });
    used_.assign(static_cast<std::size_t>(c.num_machines) * c.num_resources * horizon_, 0);
    placed_.assign(jobs.size(), false);
    current_.resize(jobs.size());
  }

  OptimalSchedule run() {
    search(0, 0.0);
    return best_;
  }

 private:
  int& used(int m, int r, int t) { return used_[(static_cast<std::size_t>(m) * config_.num_resources + r) * horizon_ + t]; }

  bool fits(int m, const Job& j, int start) {
    for (int r = 0; r < config_.num_resources; ++r)
      for (int t = start; t < start + j.duration; ++t)
        if (used(m, r, t) + j.demand[r] > config_.capacity[r]) return false;
    return true;
  }

  void mark(int m, const Job& j, int start, int sign) {
    for (int r = 0; r < config_.num_resources; ++r)
      for (int t = start; t < start + j.duration; ++t) used(m, r, t) += sign * j.demand[r];
  }

  void search(std::size_t depth, double partial) {
    if (partial >= best_.total_slowdown) return;
    if (depth == jobs_.size()) {
      best_.total_slowdown = partial;
      best_.schedule = current_;
      return;
    }
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      if (placed_[i]) continue;
      const Job& job = jobs_[i];
      for (int m = 0; m < config_.num_machines; ++m) {
        int start = job.arrival_time;
        while (!fits(m, job, start)) ++start;
        const double s = static_cast<double>(start + job.duration - job.arrival_time) / job.duration;
        placed_[i] = true;
        current_[i] = {job.id, m, start};
        mark(m, job, start, +1);
        search(depth + 1, partial + s);
        mark(m, job, start, -1);
        placed_[i] = false;
      }
    }
  }

  const std::vector<Job>& jobs_;
  const EnvConfig& config_;
  int horizon_ = 0;
  std::vector<int> used_;
  std::vector<bool> placed_;
  std::vector<ScheduledJob> current_;
  OptimalSchedule best_{std::numeric_limits<double>::infinity(), {}};
};

}  // namespace

OptimalSchedule brute_force_optimal(const JobSet& jobset, const EnvConfig& env_config) {
  if (jobset.jobs.size() > kBruteForceMaxJobs)
    throw SizeError("brute_force_optimal supports at most " + std::to_string(kBruteForceMaxJobs) + " jobs, got " +
                    std::to_string(jobset.jobs.size()));
  env_config.validate();
  for (const Job& j : jobset.jobs) {
    if (static_cast<int>(j.demand.size()) != env_config.num_resources)
      throw ConfigError("job " + std::to_string(j.id) + " resource count mismatch");
    for (int r = 0; r < env_config.num_resources; ++r)
      if (j.demand[r] > env_config.capacity[r])
        throw ConfigError("job " + std::to_string(j.id) + " demand exceeds capacity");
  }
  if (jobset.jobs.empty()) return {};
  return ExhaustiveSearch(jobset.jobs, env_config).run();
}

}  // namespace drlsched
