#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "drlsched/environment.hpp"
#include "drlsched/errors.hpp"
#include "drlsched/rng.hpp"

using namespace drlsched;

namespace {

Job make_job(int id, int arrival, int duration, std::vector<int> demand) {
  Job j;
  j.id = id;
  j.arrival_time = arrival;
  j.duration = duration;
  j.demand = std::move(demand);
  return j;
}

JobSet jobset_of(std::vector<Job> jobs) {
  JobSet js;
  js.jobs = std::move(jobs);
  return js;
}

EnvConfig two_machines() {
  EnvConfig c;
  c.num_machines = 2;
  c.reward_weights.alpha = {1.0, 1.0};
  return c;
}

}  // namespace

TEST(DecodeAction, MachineSlotAndVoid) {
  const EnvConfig c = two_machines();
  EXPECT_EQ(decode_action(7, c), (MachineSlot{1, 2}));
  EXPECT_EQ(decode_action(0, c), (MachineSlot{0, 0}));
  EXPECT_EQ(decode_action(10, c), std::nullopt);
  EXPECT_EQ(c.action_count(), 11);
  EXPECT_THROW(decode_action(11, c), DomainError);
  EXPECT_THROW(decode_action(-1, c), DomainError);
  for (int i = 0; i < c.void_action(); ++i) EXPECT_EQ(encode_action(*decode_action(i, c), c), i);
}

TEST(DecodeAction, ActionSpaceSizeAcrossConfigs) {
  for (int m = 1; m <= 4; ++m) {
    for (int q = 1; q <= 6; ++q) {
      EnvConfig c;
      c.num_machines = m;
      c.queue_length = q;
      c.reward_weights.alpha.assign(m, 1.0);
      int legal = 0;
      for (int i = -3; i < m * q + 4; ++i) {
        try {
          decode_action(i, c);
          ++legal;
        } catch (const DomainError&) {
        }
      }
      EXPECT_EQ(legal, m * q + 1);
    }
  }
}

TEST(EarliestPlacement, EmptyMachineIsOffsetZero) {
  ClusterGrid g(1, {10, 10}, 20);
  EXPECT_EQ(earliest_placement(g, 0, make_job(0, 0, 20, {10, 10})), 0);
  EXPECT_EQ(earliest_placement(g, 0, make_job(0, 0, 21, {1, 1})), std::nullopt);
}

TEST(EarliestPlacement, WaitsForBusyRowsMatchingBruteForce) {
  EnvConfig c;
  Environment env(c);
  // A CPU-saturating job of length 2 occupies rows 0-1.
  env.reset(jobset_of({make_job(0, 0, 2, {10, 1}), make_job(1, 0, 2, {1, 1})}));
  ASSERT_FALSE(env.step(0).time_advanced);
  const Job& probe = *env.state().queue[1];
  const auto expected = oracle::earliest_offset(env.state(), c, 0, probe);
  ASSERT_EQ(expected, 2);
  EXPECT_EQ(earliest_placement(env.state().grid, 0, probe), expected);
}

TEST(Reset, EmptyJobsetGivesZeroImage) {
  Environment env(EnvConfig{});
  const Observation obs = env.reset(JobSet{});
  EXPECT_EQ(obs.rows, 20);
  EXPECT_EQ(obs.cols, 124);
  for (auto v : obs.cells) EXPECT_EQ(v, 0);
}

TEST(Reset, OverflowAtTimeZeroGoesToBacklog) {
  std::vector<Job> jobs;
  for (int i = 0; i < 6; ++i) jobs.push_back(make_job(i, 0, 2, {1, 1}));
  Environment env(EnvConfig{});
  env.reset(jobset_of(jobs));
  for (int s = 0; s < 5; ++s) EXPECT_EQ(env.state().queue[s]->id, s);
  ASSERT_EQ(env.state().backlog.size(), 1u);
  EXPECT_EQ(env.state().backlog.front().id, 5);
}

TEST(Reset, IsDeterministic) {
  WorkloadParams p;
  const JobSet js = generate_jobset(p);
  Environment a(EnvConfig{}), b(EnvConfig{});
  EXPECT_EQ(a.reset(js), b.reset(js));
  EXPECT_EQ(a.state(), b.state());
}

TEST(Reset, RejectsJobsTheClusterCannotServe) {
  Environment env(EnvConfig{});
  EXPECT_THROW(env.reset(jobset_of({make_job(0, 0, 2, {11, 1})})), ConfigError);
  EXPECT_THROW(env.reset(jobset_of({make_job(0, 0, 21, {1, 1})})), ConfigError);
  EXPECT_THROW(env.reset(jobset_of({make_job(0, 0, 2, {1, 1, 1})})), ConfigError);
}

TEST(ApplyAction, VoidOnEmptySystemAdvancesWithZeroReward) {
  Environment env(EnvConfig{});
  env.reset(jobset_of({make_job(0, 3, 2, {1, 1})}));
  const StepResult r = env.step(5);
  EXPECT_TRUE(r.time_advanced);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.done);
  EXPECT_EQ(env.state().clock, 1);
}

TEST(ApplyAction, ScheduledJobDrawsBlocksOnItsMachinePanels) {
  // 2 CPU units, 1 memory unit, 3 time units, on machine 1.
  const EnvConfig c = two_machines();
  Environment env(c);
  env.reset(jobset_of({make_job(0, 0, 3, {2, 1})}));
  const StepResult r = env.step(encode_action({1, 0}, c));
  EXPECT_FALSE(r.time_advanced);
  EXPECT_EQ(r.reward, 0.0);
  const Observation& obs = r.observation;
  ASSERT_EQ(obs.cols, 144);
  for (int row = 0; row < 20; ++row) {
    EXPECT_EQ(oracle::panel_row_count(obs, row, 0, 10), 0);               // machine 0 cpu
    EXPECT_EQ(oracle::panel_row_count(obs, row, 10, 10), 0);              // machine 0 mem
    EXPECT_EQ(oracle::panel_row_count(obs, row, 20, 10), row < 3 ? 2 : 0);  // machine 1 cpu
    EXPECT_EQ(oracle::panel_row_count(obs, row, 30, 10), row < 3 ? 1 : 0);  // machine 1 mem
  }
  // The slot it left is blank.
  for (int row = 0; row < 20; ++row)
    for (int col = 40; col < 144; ++col) EXPECT_EQ(obs.at(row, col), 0);
}

TEST(ApplyAction, EmptySlotIsInvalidAndAdvancesTime) {
  Environment env(EnvConfig{});
  env.reset(jobset_of({make_job(0, 0, 2, {1, 1})}));
  const StepResult r = env.step(3);  // slot 3 is empty
  EXPECT_TRUE(r.time_advanced);
  EXPECT_EQ(env.state().clock, 1);
  EXPECT_DOUBLE_EQ(r.reward, -0.5);  // the queued job waited one step
  EXPECT_TRUE(env.state().queue[0].has_value());
}

TEST(ApplyAction, InfeasiblePlacementIsInvalid) {
  EnvConfig c;
  c.lookahead_horizon = 4;
  Environment env(c);
  env.reset(jobset_of({make_job(0, 0, 4, {10, 1}), make_job(1, 0, 1, {1, 1})}));
  EXPECT_FALSE(env.step(0).time_advanced);
  EXPECT_FALSE(env.is_valid(1));
  EXPECT_TRUE(env.step(1).time_advanced);
}

TEST(ApplyAction, OutOfRangeIsDomainError) {
  Environment env(EnvConfig{});
  env.reset(JobSet{});
  EXPECT_THROW(env.step(6), DomainError);
  EXPECT_THROW(env.step(-1), DomainError);
}

TEST(AdvanceTime, UnitJobFinishesAndGridClears) {
  Environment env(EnvConfig{});
  env.reset(jobset_of({make_job(0, 0, 1, {3, 2})}));
  env.step(0);
  const StepResult r = env.step(5);
  EXPECT_TRUE(r.done);
  ASSERT_EQ(env.state().completed.size(), 1u);
  EXPECT_EQ(env.state().completed[0].finish_time, 1);
  for (int row = 0; row < 20; ++row) {
    EXPECT_EQ(env.state().grid.used(0, 0, row), 0);
    EXPECT_EQ(env.state().grid.used(0, 1, row), 0);
  }
  EXPECT_THROW(env.step(5), StateError);
}

TEST(AdvanceTime, BacklogPromotesFifo) {
  EnvConfig c;
  c.queue_length = 1;
  c.backlog_capacity = 4;
  Environment env(c);
  env.reset(jobset_of({make_job(0, 0, 2, {1, 1}), make_job(1, 0, 2, {1, 1}), make_job(2, 0, 2, {1, 1})}));
  ASSERT_EQ(env.state().backlog.size(), 2u);
  env.step(0);  // schedules job 0, slot frees
  env.step(1);  // void
  EXPECT_EQ(env.state().queue[0]->id, 1);
  ASSERT_EQ(env.state().backlog.size(), 1u);
  EXPECT_EQ(env.state().backlog.front().id, 2);
}

TEST(AdvanceTime, BacklogOverflowDropsAndCounts) {
  EnvConfig c;
  c.queue_length = 1;
  c.backlog_capacity = 1;
  Environment env(c);
  env.reset(jobset_of({make_job(0, 0, 2, {1, 1}), make_job(1, 0, 2, {1, 1}), make_job(2, 0, 2, {1, 1})}));
  EXPECT_EQ(env.state().dropped, 1);
  EXPECT_EQ(env.state().backlog.size(), 1u);
}

TEST(AdvanceTime, SingleJobEpisodeRewardsSumToMinusSlowdown) {
  Environment env(EnvConfig{});
  env.reset(jobset_of({make_job(0, 0, 2, {1, 1})}));
  EXPECT_EQ(env.step(0).reward, 0.0);
  const StepResult first = env.step(5);
  const StepResult second = env.step(5);
  EXPECT_DOUBLE_EQ(first.reward, -0.5);
  EXPECT_DOUBLE_EQ(second.reward, -0.5);
  EXPECT_TRUE(second.done);
  EXPECT_DOUBLE_EQ(slowdown(env.state().completed.at(0)), 1.0);
}

TEST(ComputeReward, Examples) {
  EnvState s;
  RewardWeights w;
  EXPECT_EQ(compute_reward(s, w), 0.0);

  s.queue = {make_job(0, 0, 2, {1, 1})};
  w.beta = 2.0;
  EXPECT_DOUBLE_EQ(compute_reward(s, w), -1.0);

  w = RewardWeights{};
  Job a = make_job(1, 0, 3, {1, 1}), b = make_job(2, 0, 5, {1, 1});
  a.assigned_machine = b.assigned_machine = 0;
  a.schedule_time = b.schedule_time = 0;
  s.running = {a, b};
  s.queue = {make_job(3, 0, 2, {1, 1})};
  s.backlog = {make_job(4, 0, 4, {1, 1})};
  EXPECT_NEAR(compute_reward(s, w), -77.0 / 60.0, 1e-15);
  EXPECT_NEAR(compute_reward(s, w), oracle::reward(s, w), 1e-15);
}

TEST(ComputeReward, WeightsApplyPerTerm) {
  EnvState s;
  Job a = make_job(1, 0, 4, {1, 1});
  a.assigned_machine = 1;
  a.schedule_time = 0;
  s.running = {a};
  s.queue = {make_job(2, 0, 2, {1, 1}), std::nullopt};
  s.backlog = {make_job(3, 0, 5, {1, 1})};
  RewardWeights w{{0.5, 3.0}, 2.0, 10.0};
  EXPECT_DOUBLE_EQ(compute_reward(s, w), -(3.0 / 4 + 2.0 / 2 + 10.0 / 5));
}

TEST(EncodeObservation, WidthFormula) {
  EnvConfig c;
  EXPECT_EQ(c.observation_cols(), 2 * 10 + 5 * 2 * 10 + 4);
  EXPECT_EQ(c.observation_rows() * c.observation_cols(), 2480);
  EXPECT_EQ(two_machines().observation_cols(), 144);
  EnvConfig odd;
  odd.backlog_capacity = 81;
  EXPECT_EQ(odd.observation_cols(), 125);
}

TEST(EncodeObservation, QueueAndBacklogPanels) {
  EnvConfig c;
  c.queue_length = 2;
  c.backlog_capacity = 30;  // two backlog columns
  Environment env(c);
  std::vector<Job> jobs{make_job(0, 0, 3, {4, 2}), make_job(1, 0, 1, {1, 5})};
  for (int i = 2; i < 25; ++i) jobs.push_back(make_job(i, 0, 1, {1, 1}));
  const Observation obs = env.reset(jobset_of(jobs));
  ASSERT_EQ(obs.cols, 20 + 2 * 20 + 2);
  for (int row = 0; row < 20; ++row) {
    EXPECT_EQ(oracle::panel_row_count(obs, row, 20, 10), row < 3 ? 4 : 0);
    EXPECT_EQ(oracle::panel_row_count(obs, row, 30, 10), row < 3 ? 2 : 0);
    EXPECT_EQ(oracle::panel_row_count(obs, row, 40, 10), row < 1 ? 1 : 0);
    EXPECT_EQ(oracle::panel_row_count(obs, row, 50, 10), row < 1 ? 5 : 0);
  }
  // 23 backlogged jobs: first column full, three cells in the second.
  for (int row = 0; row < 20; ++row) {
    EXPECT_EQ(obs.at(row, 60), 1);
    EXPECT_EQ(obs.at(row, 61), row < 3 ? 1 : 0);
  }
}

TEST(Slowdown, Examples) {
  Job j = make_job(0, 0, 2, {1, 1});
  EXPECT_THROW(slowdown(j), StateError);
  j.schedule_time = 0;
  j.finish_time = 2;
  EXPECT_DOUBLE_EQ(slowdown(j), 1.0);
  j.schedule_time = 1;
  j.finish_time = 3;
  EXPECT_DOUBLE_EQ(slowdown(j), 1.5);
}

TEST(Slowdown, DelayedStartViaEnvironment) {
  Environment env(EnvConfig{});
  env.reset(jobset_of({make_job(0, 0, 2, {1, 1})}));
  env.step(5);  // wait one step
  env.step(0);
  env.step(5);
  env.step(5);
  ASSERT_TRUE(env.done());
  EXPECT_DOUBLE_EQ(slowdown(env.state().completed.at(0)), 1.5);
}

// Random episodes driven by a policy that mixes valid, invalid and void
// actions. Every step is audited against the oracles.
TEST(EnvironmentProperties, RandomEpisodesKeepInvariants) {
  for (int m : {1, 2}) {
    EnvConfig c;
    c.num_machines = m;
    c.reward_weights.alpha.assign(m, 1.0);
    c.max_episode_length = 10'000;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      WorkloadParams p;
      p.seed = seed;
      p.arrival_rate = 0.9;
      const JobSet js = generate_jobset(p);
      Environment env(c);
      env.reset(js);
      Rng rng(seed + 100);
      double total = 0.0;
      std::vector<int> promotion_order;
      while (!env.done()) {
        const int action = uniform_int(rng, 0, c.void_action());
        const EnvState before = env.state();
        std::optional<int> expected_offset;
        if (auto ms = decode_action(action, c); ms && before.queue[ms->slot])
          expected_offset = oracle::earliest_offset(before, c, ms->machine, *before.queue[ms->slot]);

        const StepResult r = env.step(action);
        total += r.reward;
        const EnvState& s = env.state();
        EXPECT_LE(r.reward, 0.0);
        if (!r.time_advanced) {
          EXPECT_EQ(r.reward, 0.0);
          ASSERT_TRUE(expected_offset.has_value());
          EXPECT_EQ(*s.running.back().schedule_time, before.clock + *expected_offset);
        } else {
          EXPECT_DOUBLE_EQ(r.reward, oracle::reward(before, c.reward_weights));
        }
        EXPECT_LE(static_cast<int>(s.backlog.size()), c.backlog_capacity);
        for (int mm = 0; mm < m; ++mm) {
          for (int res = 0; res < c.num_resources; ++res) {
            for (int row = 0; row < c.lookahead_horizon; ++row) {
              const int used = s.grid.used(mm, res, row);
              ASSERT_EQ(used, oracle::occupancy(s, mm, res, s.clock + row));
              ASSERT_LE(used, c.capacity[res]);
              EXPECT_EQ(oracle::panel_row_count(r.observation, row, (mm * 2 + res) * 10, 10), used);
            }
          }
        }
      }
      // Unit weights, no truncation: rewards telescope to minus the total slowdown.
      ASSERT_EQ(env.state().dropped, 0);
      ASSERT_TRUE(env.all_jobs_handled());
      double total_slowdown = 0.0;
      for (const Job& j : env.state().completed) {
        EXPECT_GE(slowdown(j), 1.0);
        EXPECT_EQ(*j.finish_time - *j.schedule_time, j.duration);
        total_slowdown += slowdown(j);
      }
      EXPECT_NEAR(total, -total_slowdown, 1e-9);
    }
  }
}

TEST(EnvironmentProperties, SameActionsSameResults) {
  WorkloadParams p;
  p.seed = 5;
  const JobSet js = generate_jobset(p);
  Environment a(EnvConfig{}), b(EnvConfig{});
  a.reset(js);
  b.reset(js);
  Rng rng(3);
  while (!a.done()) {
    const int action = uniform_int(rng, 0, 5);
    const StepResult ra = a.step(action);
    const StepResult rb = b.step(action);
    ASSERT_EQ(ra.observation, rb.observation);
    ASSERT_EQ(ra.reward, rb.reward);
    ASSERT_EQ(ra.done, rb.done);
  }
  EXPECT_EQ(a.state(), b.state());
}
