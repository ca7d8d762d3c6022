#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "drlsched/baselines.hpp"
#include "drlsched/errors.hpp"
#include "drlsched/trainer.hpp"

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

Trajectory with_returns(std::vector<double> returns) {
  Trajectory t;
  t.returns = std::move(returns);
  t.actions.resize(t.returns.size());
  return t;
}

// Small enough that a training iteration takes milliseconds.
struct Toy {
  EnvConfig env;
  WorkloadParams workload;
  NetConfig net;

  Toy() {
    env.num_resources = 1;
    env.capacity = {4};
    env.lookahead_horizon = 6;
    env.queue_length = 2;
    env.backlog_capacity = 6;
    env.max_episode_length = 40;
    workload.num_resources = 1;
    workload.capacity = {4};
    workload.short_duration = {1, 2};
    workload.long_duration = {4, 5};
    workload.arrival_window = 8;
    net = net_config_for(env);
  }

  std::vector<JobSet> jobsets(int n, std::uint64_t base) const {
    std::vector<JobSet> out;
    for (int k = 0; k < n; ++k) {
      WorkloadParams w = workload;
      w.seed = base + k;
      out.push_back(generate_jobset(w));
    }
    return out;
  }

  TrainConfig train(int jobsets, int episodes) const {
    TrainConfig c;
    c.jobsets_per_iteration = jobsets;
    c.episodes_per_jobset = episodes;
    c.max_episode_length = 200;
    return c;
  }
};

}  // namespace

TEST(Returns, Undiscounted) {
  const std::vector<double> r{-1, -2, -3};
  EXPECT_EQ(compute_returns(r, 1.0), (std::vector<double>{-6, -5, -3}));
}

TEST(Returns, ZeroDiscountKeepsImmediateReward) {
  const std::vector<double> r{-1, -2, -3};
  EXPECT_EQ(compute_returns(r, 0.0), r);
}

TEST(Returns, HalfDiscount) {
  const std::vector<double> r{-1, -1};
  EXPECT_EQ(compute_returns(r, 0.5), (std::vector<double>{-1.5, -1}));
  EXPECT_TRUE(compute_returns({}, 0.5).empty());
}

TEST(Baseline, AveragesTrajectoriesThatReachEachIndex) {
  const std::vector<Trajectory> ts{with_returns({-4, -2}), with_returns({-2, -1, -1})};
  EXPECT_EQ(compute_baseline(ts), (std::vector<double>{-3, -1.5, -1}));
  const auto adv = compute_advantages(ts);
  EXPECT_EQ(adv[0], (std::vector<double>{-1, -0.5}));
  EXPECT_EQ(adv[1], (std::vector<double>{1, 0.5, 0}));
}

TEST(Baseline, IdenticalTrajectoriesHaveZeroAdvantage) {
  const std::vector<Trajectory> ts(3, with_returns({-5, -3, -1}));
  for (const auto& a : compute_advantages(ts))
    for (double v : a) EXPECT_EQ(v, 0.0);
}

TEST(Rollout, EmptyJobsetEndsImmediately) {
  const Toy toy;
  Rng rng(1);
  const Trajectory t = rollout(toy.env, JobSet{{}, toy.workload}, init_params(toy.net, 1), rng, 100);
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.summary.jobs_finished, 0);
  EXPECT_EQ(t.summary.mean_slowdown(), std::nullopt);
}

TEST(Rollout, OneHotPolicyIsDeterministic) {
  const Toy toy;
  PolicyParams p = zero_params(toy.net);
  p.weights.fc_bias[0] = 1e3;  // always slot 0
  const JobSet js = toy.jobsets(1, 3)[0];
  Rng a(1), b(999);
  const Trajectory ta = rollout(toy.env, js, p, a, 500);
  const Trajectory tb = rollout(toy.env, js, p, b, 500);
  EXPECT_EQ(ta.actions, tb.actions);
  EXPECT_EQ(ta.rewards, tb.rewards);
  for (int act : ta.actions) EXPECT_EQ(act, 0);
}

TEST(Rollout, RespectsDecisionCap) {
  const Toy toy;
  Rng rng(2);
  const Trajectory t = rollout(toy.env, toy.jobsets(1, 5)[0], init_params(toy.net, 1), rng, 3);
  EXPECT_LE(t.size(), 3u);
  EXPECT_EQ(t.observations.size(), t.actions.size());
  EXPECT_EQ(t.rewards.size(), t.actions.size());
}

TEST(Rollout, RewardsSumToSummaryTotal) {
  const Toy toy;
  Rng rng(3);
  const Trajectory t = rollout(toy.env, toy.jobsets(1, 8)[0], init_params(toy.net, 2), rng, 10'000);
  EXPECT_NEAR(std::accumulate(t.rewards.begin(), t.rewards.end(), 0.0), t.summary.total_reward, 1e-12);
}

TEST(TrainIteration, ZeroAdvantageLeavesWeightsUnchanged) {
  // A one-hot policy on a single jobset produces identical trajectories,
  // so every advantage is zero and so is the gradient.
  const Toy toy;
  PolicyParams p = zero_params(toy.net);
  p.weights.fc_bias[toy.env.void_action()] = 1e3;
  const PolicyParams before = p;
  const auto js = toy.jobsets(1, 4);
  train_iteration(p, js, toy.env, toy.train(1, 5));
  EXPECT_EQ(p.weights, before.weights);
  EXPECT_EQ(p.iteration, 1u);
}

TEST(TrainIteration, FixedSeedReproducible) {
  const Toy toy;
  const auto js = toy.jobsets(3, 10);
  PolicyParams a = init_params(toy.net, 5), b = init_params(toy.net, 5);
  for (int i = 0; i < 3; ++i) {
    const auto ra = train_iteration(a, js, toy.env, toy.train(3, 4));
    const auto rb = train_iteration(b, js, toy.env, toy.train(3, 4));
    EXPECT_EQ(ra.mean_total_reward, rb.mean_total_reward);
    EXPECT_EQ(ra.mean_slowdown, rb.mean_slowdown);
  }
  EXPECT_EQ(a, b);
  EXPECT_NE(a.weights, init_params(toy.net, 5).weights);
}

TEST(TrainIteration, ThreadCountDoesNotChangeResults) {
  const Toy toy;
  const auto js = toy.jobsets(4, 20);
  PolicyParams serial = init_params(toy.net, 6), threaded = serial;
  TrainConfig one = toy.train(4, 3), many = one;
  many.threads = 3;
  for (int i = 0; i < 2; ++i) {
    train_iteration(serial, js, toy.env, one);
    train_iteration(threaded, js, toy.env, many);
  }
  EXPECT_EQ(serial, threaded);
}

TEST(TrainIteration, EmptyJobsetListIsDomainError) {
  const Toy toy;
  PolicyParams p = init_params(toy.net, 1);
  EXPECT_THROW(train_iteration(p, std::vector<JobSet>{}, toy.env, toy.train(1, 1)), DomainError);
}

TEST(TrainIteration, ToyProblemImproves) {
  // One short job arrives at t=0 and nothing else: scheduling it at once
  // earns -1 in total; every void step before that costs another -1.
  Toy toy;
  const JobSet js{{make_job(0, 0, 1, {2})}, toy.workload};
  const std::vector<JobSet> sets{js};
  NetConfig net = toy.net;
  net.learning_rate = 0.1;
  PolicyParams p = zero_params(net);  // exactly uniform over the 3 actions

  // Each decision schedules with probability 1/3 (slot 0); each failure costs
  // a step of -1, and the scheduled job still runs one step: E = -(2 + 1).
  const double uniform_return = -3.0;
  TrainConfig cfg = toy.train(1, 50);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 40; ++i) {
    const auto r = train_iteration(p, sets, toy.env, cfg);
    if (i == 0) first = r.mean_total_reward;
    if (i >= 35) last += r.mean_total_reward / 5;
  }
  EXPECT_NEAR(first, uniform_return, 1.0);  // ~3 standard errors over 50 episodes
  EXPECT_GT(last, first);
  EXPECT_GT(last, -1.5);
  EXPECT_EQ(run_greedy_episode(p, js, toy.env, 100).mean_slowdown(), 1.0);
}

TEST(Evaluate, EmptyJobsetsHaveNoSlowdown) {
  const Toy toy;
  const std::vector<JobSet> empty(3, JobSet{{}, toy.workload});
  const EvalSummary s = evaluate(init_params(toy.net, 1), empty, toy.env, 100);
  EXPECT_EQ(s.mean_slowdown, std::nullopt);
  EXPECT_EQ(s.episodes, 3);
}

TEST(Evaluate, RepeatedEvaluationIsIdentical) {
  const Toy toy;
  const auto js = toy.jobsets(5, 40);
  const PolicyParams p = init_params(toy.net, 3);
  const EvalSummary a = evaluate(p, js, toy.env, 500);
  const EvalSummary b = evaluate(p, js, toy.env, 500);
  EXPECT_EQ(a.mean_slowdown, b.mean_slowdown);
  EXPECT_EQ(a.std_slowdown, b.std_slowdown);
  EXPECT_EQ(a.mean_reward, b.mean_reward);
}

TEST(Evaluate, UntrainedUniformPolicyIsWorseThanSjf) {
  const EnvConfig env;
  std::vector<JobSet> js;
  for (std::uint64_t k = 0; k < 10; ++k) {
    WorkloadParams w;
    w.seed = 100 + k;
    js.push_back(generate_jobset(w));
  }
  std::vector<EpisodeSummary> uniform, sjf;
  for (std::size_t k = 0; k < js.size(); ++k) {
    Rng a(k), b(k);
    uniform.push_back(run_uniform_policy_episode(env, js[k], a));
    sjf.push_back(run_heuristic_episode(env, js[k], HeuristicKind::sjf, b));
  }
  EXPECT_GT(*aggregate(uniform).mean_slowdown, *aggregate(sjf).mean_slowdown);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(17, 0);
  parallel_for(17, 4, [&](int i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(5, 2, [](int i) {
                 if (i == 3) throw StateError("boom");
               }),
               StateError);
}

TEST(Aggregate, MeanOfEpisodeMeansAndPopulationStd) {
  EpisodeSummary a, b, empty;
  a.slowdowns = {1.0, 3.0};  // mean 2
  a.total_reward = -4;
  a.jobs_dropped = 1;
  b.slowdowns = {4.0};  // mean 4
  b.total_reward = -4;
  b.jobs_truncated = 2;
  const std::vector<EpisodeSummary> eps{a, b, empty};
  const EvalSummary s = aggregate(eps);
  EXPECT_EQ(s.mean_slowdown, 3.0);
  EXPECT_DOUBLE_EQ(s.std_slowdown, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_reward, -8.0 / 3);
  EXPECT_EQ(s.jobs_dropped, 1);
  EXPECT_EQ(s.jobs_truncated, 2);
  EXPECT_EQ(s.episodes, 3);
}
