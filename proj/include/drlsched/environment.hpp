#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "drlsched/workload.hpp"

namespace drlsched {

struct RewardWeights {
  std::vector<double> alpha{1.0};  ///< one weight per machine
  double beta = 1.0;               ///< queued jobs
  double gamma_weight = 1.0;       ///< backlogged jobs

  bool operator==(const RewardWeights&) const = default;
};

struct EnvConfig {
  int num_machines = 1;
  int num_resources = 2;
  std::vector<int> capacity{10, 10};  ///< shared by all machines
  int lookahead_horizon = 20;
  int queue_length = 5;
  int backlog_capacity = 80;
  RewardWeights reward_weights;
  int max_episode_length = 200;  ///< timesteps

  /// Throws ConfigError.
  void validate() const;

  int action_count() const { return num_machines * queue_length + 1; }
  int void_action() const { return num_machines * queue_length; }
  int total_capacity() const;
  int backlog_panel_width() const;
  int observation_rows() const { return lookahead_horizon; }
  int observation_cols() const;

  bool operator==(const EnvConfig&) const = default;
};

/// Per machine and resource, the number of allocated units in each of the
/// lookahead rows. Row 0 is the current timestep. The binary image packs these
/// counts to the left, so the count is the whole state.
class ClusterGrid {
 public:
  ClusterGrid() = default;
  ClusterGrid(int machines, std::vector<int> capacity, int horizon);

  int machines() const { return machines_; }
  int resources() const { return static_cast<int>(capacity_.size()); }
  int horizon() const { return horizon_; }
  int capacity(int resource) const { return capacity_[resource]; }

  int used(int machine, int resource, int row) const { return used_[index(machine, resource, row)]; }
  int free(int machine, int resource, int row) const {
    return capacity_[resource] - used(machine, resource, row);
  }

  /// True when the job fits on `machine` for rows [offset, offset + duration).
  bool fits(int machine, const Job& job, int offset) const;
  /// Precondition: fits(machine, job, offset).
  void allocate(int machine, const Job& job, int offset);
  /// Drops row 0 and appends an empty bottom row.
  void shift();

  bool operator==(const ClusterGrid&) const = default;

 private:
  std::size_t index(int machine, int resource, int row) const {
    return (static_cast<std::size_t>(machine) * capacity_.size() + resource) * horizon_ + row;
  }

  int machines_ = 0;
  int horizon_ = 0;
  std::vector<int> capacity_;
  std::vector<int> used_;
};

/// Smallest start offset s in [0, horizon - duration] at which the job fits on
/// the machine, or nullopt.
std::optional<int> earliest_placement(const ClusterGrid& grid, int machine, const Job& job);

struct MachineSlot {
  int machine = 0;
  int slot = 0;

  bool operator==(const MachineSlot&) const = default;
};

/// index < m*q -> (index / q, index % q); index == m*q -> nullopt (void).
/// Throws DomainError outside [0, m*q].
std::optional<MachineSlot> decode_action(int index, const EnvConfig& config);
int encode_action(MachineSlot ms, const EnvConfig& config);

struct EnvState {
  ClusterGrid grid;
  std::vector<std::optional<Job>> queue;
  std::deque<Job> backlog;
  std::vector<Job> running;  ///< allocated, unfinished (some may start in the future)
  int clock = 0;
  std::vector<Job> arrivals;  ///< the whole jobset, in arrival order
  std::size_t next_arrival = 0;
  std::vector<Job> completed;
  int dropped = 0;

  bool operator==(const EnvState&) const = default;
};

/// Binary image, row-major.
struct Observation {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;

  std::uint8_t at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Observation&) const = default;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool time_advanced = false;
  bool done = false;
};

/// Weighted sum of reciprocal durations of every job in the system, negated:
/// -(sum_l alpha_l sum_{i on l} 1/T_i + beta sum_{queue} 1/T_j + gamma sum_{backlog} 1/T_k).
double compute_reward(const EnvState& state, const RewardWeights& weights);

/// Left to right: machine panels (one per resource each), queue-slot panels,
/// then the backlog panel filled column-major.
Observation encode_observation(const EnvState& state, const EnvConfig& config);

/// (finish - arrival) / duration. Throws StateError for unfinished jobs.
double slowdown(const Job& job);

/// The scheduling MDP. Scheduling actions do not move time and earn no reward;
/// the void action or an invalid action advances the clock by one step.
class Environment {
 public:
  explicit Environment(EnvConfig config);

  /// Throws ConfigError if a job cannot ever be served by this cluster.
  Observation reset(const JobSet& jobset);

  /// Throws DomainError for an index outside [0, m*q], StateError after done.
  StepResult step(int action);
  StepResult advance_time();

  /// True when the action would schedule a job (slot occupied and placement exists).
  bool is_valid(int action) const;

  Observation observe() const { return encode_observation(state_, config_); }
  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  bool done() const { return done_; }
  bool all_jobs_handled() const;

 private:
  void admit(Job job);

  EnvConfig config_;
  EnvState state_;
  bool done_ = false;
};

}  // namespace drlsched
