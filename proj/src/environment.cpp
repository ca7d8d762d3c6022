#include "drlsched/environment.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "drlsched/errors.hpp"

namespace drlsched {

void EnvConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("env." + msg); };
  if (num_machines < 1) fail("num_machines must be >= 1");
  if (num_resources < 1) fail("num_resources must be >= 1");
  if (static_cast<int>(capacity.size()) != num_resources) fail("capacity needs num_resources entries");
  for (int c : capacity)
    if (c < 1) fail("capacity entries must be >= 1");
  if (lookahead_horizon < 1) fail("lookahead_horizon must be >= 1");
  if (queue_length < 1) fail("queue_length must be >= 1");
  if (backlog_capacity < 0) fail("backlog_capacity must be >= 0");
  if (max_episode_length < 1) fail("max_episode_length must be >= 1");
  if (static_cast<int>(reward_weights.alpha.size()) != num_machines) fail("alpha needs num_machines entries");
  for (double a : reward_weights.alpha)
    if (!(a >= 0.0)) fail("alpha entries must be >= 0");
  if (!(reward_weights.beta >= 0.0)) fail("beta must be >= 0");
  if (!(reward_weights.gamma_weight >= 0.0)) fail("gamma must be >= 0");
}

int EnvConfig::total_capacity() const {
  return std::accumulate(capacity.begin(), capacity.end(), 0);
}

int EnvConfig::backlog_panel_width() const {
  return (backlog_capacity + lookahead_horizon - 1) / lookahead_horizon;
}

int EnvConfig::observation_cols() const {
  return (num_machines + queue_length) * total_capacity() + backlog_panel_width();
}

ClusterGrid::ClusterGrid(int machines, std::vector<int> capacity, int horizon)
    : machines_(machines), horizon_(horizon), capacity_(std::move(capacity)) {
  used_.assign(static_cast<std::size_t>(machines_) * capacity_.size() * horizon_, 0);
}

bool ClusterGrid::fits(int machine, const Job& job, int offset) const {
  if (offset < 0 || offset + job.duration > horizon_) return false;
  for (int r = 0; r < resources(); ++r) {
    for (int row = offset; row < offset + job.duration; ++row) {
      if (free(machine, r, row) < job.demand[r]) return false;
    }
  }
  return true;
}

void ClusterGrid::allocate(int machine, const Job& job, int offset) {
  for (int r = 0; r < resources(); ++r) {
    for (int row = offset; row < offset + job.duration; ++row) used_[index(machine, r, row)] += job.demand[r];
  }
}

void ClusterGrid::shift() {
  for (int m = 0; m < machines_; ++m) {
    for (int r = 0; r < resources(); ++r) {
      auto first = used_.begin() + static_cast<std::ptrdiff_t>(index(m, r, 0));
      std::rotate(first, first + 1, first + horizon_);
      *(first + horizon_ - 1) = 0;
    }
  }
}

std::optional<int> earliest_placement(const ClusterGrid& grid, int machine, const Job& job) {
  for (int s = 0; s + job.duration <= grid.horizon(); ++s) {
    if (grid.fits(machine, job, s)) return s;
  }
  return std::nullopt;
}

std::optional<MachineSlot> decode_action(int index, const EnvConfig& config) {
  if (index < 0 || index > config.void_action())
    throw DomainError("action index " + std::to_string(index) + " outside [0, " +
                      std::to_string(config.void_action()) + "]");
  if (index == config.void_action()) return std::nullopt;
  return MachineSlot{index / config.queue_length, index % config.queue_length};
}

int encode_action(MachineSlot ms, const EnvConfig& config) {
  return ms.machine * config.queue_length + ms.slot;
}

double compute_reward(const EnvState& state, const RewardWeights& weights) {
  double machine_term = 0.0;
  for (const Job& j : state.running) machine_term += weights.alpha[*j.assigned_machine] / j.duration;
  double queue_term = 0.0;
  for (const auto& slot : state.queue)
    if (slot) queue_term += 1.0 / slot->duration;
  double backlog_term = 0.0;
  for (const Job& j : state.backlog) backlog_term += 1.0 / j.duration;
  return -(machine_term + weights.beta * queue_term + weights.gamma_weight * backlog_term);
}

Observation encode_observation(const EnvState& state, const EnvConfig& config) {
  Observation obs;
  obs.rows = config.observation_rows();
  obs.cols = config.observation_cols();
  obs.cells.assign(static_cast<std::size_t>(obs.rows) * obs.cols, 0);
  auto fill = [&](int col0, int row, int width) {
    std::fill_n(obs.cells.begin() + static_cast<std::ptrdiff_t>(row) * obs.cols + col0, width, 1);
  };

  int col = 0;
  for (int m = 0; m < config.num_machines; ++m) {
    for (int r = 0; r < config.num_resources; ++r) {
      for (int row = 0; row < obs.rows; ++row) fill(col, row, state.grid.used(m, r, row));
      col += config.capacity[r];
    }
  }
  for (int s = 0; s < config.queue_length; ++s) {
    const auto& slot = state.queue[s];
    for (int r = 0; r < config.num_resources; ++r) {
      if (slot) {
        for (int row = 0; row < slot->duration; ++row) fill(col, row, slot->demand[r]);
      }
      col += config.capacity[r];
    }
  }
  for (std::size_t k = 0; k < state.backlog.size(); ++k) {
    const int c = static_cast<int>(k) / obs.rows;
    const int row = static_cast<int>(k) % obs.rows;
    obs.cells[static_cast<std::size_t>(row) * obs.cols + col + c] = 1;
  }
  return obs;
}

double slowdown(const Job& job) {
  if (!job.finish_time) throw StateError("slowdown of unfinished job " + std::to_string(job.id));
  return static_cast<double>(*job.finish_time - job.arrival_time) / job.duration;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
  state_.grid = ClusterGrid(config_.num_machines, config_.capacity, config_.lookahead_horizon);
  state_.queue.assign(config_.queue_length, std::nullopt);
}

Observation Environment::reset(const JobSet& jobset) {
  int prev_arrival = 0;
  for (const Job& j : jobset.jobs) {
    const std::string id = "job " + std::to_string(j.id);
    if (static_cast<int>(j.demand.size()) != config_.num_resources)
      throw ConfigError(id + " has " + std::to_string(j.demand.size()) + " resources, cluster has " +
                        std::to_string(config_.num_resources));
    for (int r = 0; r < config_.num_resources; ++r) {
      if (j.demand[r] < 1 || j.demand[r] > config_.capacity[r])
        throw ConfigError(id + " demand exceeds capacity of resource " + std::to_string(r));
    }
    if (j.duration < 1 || j.duration > config_.lookahead_horizon)
      throw ConfigError(id + " duration " + std::to_string(j.duration) + " exceeds lookahead horizon");
    if (j.arrival_time < prev_arrival) throw ConfigError("jobset not ordered by arrival time");
    prev_arrival = j.arrival_time;
  }

  state_ = EnvState{};
  state_.grid = ClusterGrid(config_.num_machines, config_.capacity, config_.lookahead_horizon);
  state_.queue.assign(config_.queue_length, std::nullopt);
  state_.arrivals = jobset.jobs;
  for (Job& j : state_.arrivals) {
    j.schedule_time.reset();
    j.assigned_machine.reset();
    j.finish_time.reset();
  }
  done_ = false;
  while (state_.next_arrival < state_.arrivals.size() &&
         state_.arrivals[state_.next_arrival].arrival_time <= state_.clock)
    admit(state_.arrivals[state_.next_arrival++]);
  done_ = all_jobs_handled();
  return observe();
}

void Environment::admit(Job job) {
  for (auto& slot : state_.queue) {
    if (!slot) {
      slot = std::move(job);
      return;
    }
  }
  if (static_cast<int>(state_.backlog.size()) < config_.backlog_capacity) {
    state_.backlog.push_back(std::move(job));
    return;
  }
  ++state_.dropped;
}

bool Environment::all_jobs_handled() const {
  if (state_.next_arrival < state_.arrivals.size()) return false;
  if (!state_.running.empty() || !state_.backlog.empty()) return false;
  return std::none_of(state_.queue.begin(), state_.queue.end(), [](const auto& s) { return s.has_value(); });
}

bool Environment::is_valid(int action) const {
  const auto target = decode_action(action, config_);
  if (!target) return false;
  const auto& slot = state_.queue[target->slot];
  return slot && earliest_placement(state_.grid, target->machine, *slot).has_value();
}

StepResult Environment::step(int action) {
  const auto target = decode_action(action, config_);
  if (done_) throw StateError("step() called on a finished episode");
  if (target) {
    auto& slot = state_.queue[target->slot];
    if (slot) {
      if (const auto offset = earliest_placement(state_.grid, target->machine, *slot)) {
        Job job = std::move(*slot);
        slot.reset();
        state_.grid.allocate(target->machine, job, *offset);
        job.schedule_time = state_.clock + *offset;
        job.assigned_machine = target->machine;
        state_.running.push_back(std::move(job));
        return StepResult{observe(), 0.0, false, false};
      }
    }
  }
  return advance_time();
}

StepResult Environment::advance_time() {
  if (done_) throw StateError("advance_time() called on a finished episode");
  // The reward covers the step that is ending: every job present in [clock, clock+1).
  const double reward = compute_reward(state_, config_.reward_weights);

  ++state_.clock;
  state_.grid.shift();
  auto still_running = std::stable_partition(state_.running.begin(), state_.running.end(), [&](const Job& j) {
    return *j.schedule_time + j.duration > state_.clock;
  });
  for (auto it = still_running; it != state_.running.end(); ++it) {
    it->finish_time = *it->schedule_time + it->duration;
    state_.completed.push_back(std::move(*it));
  }
  state_.running.erase(still_running, state_.running.end());

  for (auto& slot : state_.queue) {
    if (!slot && !state_.backlog.empty()) {
      slot = std::move(state_.backlog.front());
      state_.backlog.pop_front();
    }
  }
  while (state_.next_arrival < state_.arrivals.size() &&
         state_.arrivals[state_.next_arrival].arrival_time <= state_.clock)
    admit(state_.arrivals[state_.next_arrival++]);

  done_ = all_jobs_handled() || state_.clock >= config_.max_episode_length;
  return StepResult{observe(), reward, true, done_};
}

}  // namespace drlsched
