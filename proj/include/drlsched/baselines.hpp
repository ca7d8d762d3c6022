#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "drlsched/environment.hpp"
#include "drlsched/metrics.hpp"
#include "drlsched/rng.hpp"

namespace drlsched {

enum class HeuristicKind { sjf, packer, random };

std::string_view to_string(HeuristicKind kind);
/// Throws ParameterError for unknown names.
HeuristicKind heuristic_from_string(std::string_view name);

/// Chooses among (job, machine) pairs whose job has a feasible placement on the
/// machine; returns the void action when there is none.
///   sjf     shortest duration (lowest slot on ties), then the machine with the
///           earliest placement (lowest machine on ties)
///   packer  largest demand . free-capacity-at-current-row inner product
///           (lowest action index on ties)
///   random  uniform over feasible pairs
/// `rng` is only drawn from by `random`.
int heuristic_action(const Environment& env, HeuristicKind kind, Rng& rng);

/// Drives one episode with the heuristic until done or `max_len` decisions.
EpisodeSummary run_heuristic_episode(const EnvConfig& env_config, const JobSet& jobset, HeuristicKind kind,
                                     Rng& rng, int max_len = 1'000'000);

/// The untrained-agent reference: samples uniformly over all m*q + 1 action
/// indices, empty slots and infeasible placements included (those advance time).
EpisodeSummary run_uniform_policy_episode(const EnvConfig& env_config, const JobSet& jobset, Rng& rng,
                                          int max_len = 1'000'000);

struct ScheduledJob {
  int id = 0;
  int machine = 0;
  int start = 0;
};

struct OptimalSchedule {
  double total_slowdown = 0.0;
  std::vector<ScheduledJob> schedule;  ///< one witness, in jobset order
};

inline constexpr std::size_t kBruteForceMaxJobs = 5;

/// Minimum total slowdown over every non-preemptive assignment of jobs to
/// machines and start times (start >= arrival, per-timestep capacity respected).
/// Queue length and lookahead horizon do not constrain the search, so the result
/// lower-bounds every schedule the environment can produce.
/// Throws SizeError above kBruteForceMaxJobs jobs.
OptimalSchedule brute_force_optimal(const JobSet& jobset, const EnvConfig& env_config);

}  // namespace drlsched
