#include "drlsched/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "drlsched/errors.hpp"

namespace drlsched {

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("train." + msg); };
  if (num_iterations < 1) fail("num_iterations must be >= 1");
  if (jobsets_per_iteration < 1) fail("jobsets_per_iteration must be >= 1");
  if (episodes_per_jobset < 1) fail("episodes_per_jobset must be >= 1");
  if (!(discount > 0.0 && discount <= 1.0)) fail("discount must lie in (0,1]");
  if (max_episode_length < 1) fail("max_episode_length must be >= 1");
  if (eval_every < 1) fail("eval_every must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

Trajectory rollout(const EnvConfig& env_config, const JobSet& jobset, const PolicyParams& params, Rng& rng,
                   int max_len) {
  Environment env(env_config);
  Observation obs = env.reset(jobset);
  Trajectory traj;
  ForwardTrace trace;
  double total = 0.0;
  const PreparedPolicy policy = prepare(params);
  while (!env.done() && static_cast<int>(traj.size()) < max_len) {
    forward(obs, policy, trace);
    const int action = sample_action(trace.probs, rng);
    StepResult res = env.step(action);
    traj.observations.push_back(std::move(obs));
    traj.actions.push_back(action);
    traj.rewards.push_back(res.reward);
    total += res.reward;
    obs = std::move(res.observation);
  }
  traj.summary = summarize_episode(env, total, static_cast<int>(traj.size()));
  return traj;
}

std::vector<double> compute_returns(std::span<const double> rewards, double discount) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + discount * acc;
    out[t] = acc;
  }
  return out;
}

std::vector<double> compute_baseline(std::span<const Trajectory> trajectories) {
  std::size_t longest = 0;
  for (const auto& tr : trajectories) longest = std::max(longest, tr.returns.size());
  std::vector<double> sum(longest, 0.0);
  std::vector<int> count(longest, 0);
  for (const auto& tr : trajectories) {
    for (std::size_t t = 0; t < tr.returns.size(); ++t) {
      sum[t] += tr.returns[t];
      ++count[t];
    }
  }
  for (std::size_t t = 0; t < longest; ++t) sum[t] /= count[t];
  return sum;
}

std::vector<std::vector<double>> compute_advantages(std::span<const Trajectory> trajectories) {
  const auto baseline = compute_baseline(trajectories);
  std::vector<std::vector<double>> out;
  out.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    std::vector<double> adv(tr.returns.size());
    for (std::size_t t = 0; t < adv.size(); ++t) adv[t] = tr.returns[t] - baseline[t];
    out.push_back(std::move(adv));
  }
  return out;
}

IterationReport train_iteration(PolicyParams& params, std::span<const JobSet> jobsets, const EnvConfig& env_config,
                                const TrainConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const int num_jobsets = static_cast<int>(jobsets.size());
  if (num_jobsets == 0) throw DomainError("train_iteration: no jobsets");
  const int episodes = config.episodes_per_jobset;
  const std::uint64_t iteration = params.iteration;

  std::vector<std::vector<Trajectory>> batches(num_jobsets);
  parallel_for(num_jobsets, config.threads, [&](int j) {
    auto& batch = batches[j];
    batch.reserve(episodes);
    for (int e = 0; e < episodes; ++e) {
      Rng rng(derive_seed(config.seed, {stream::kRollout, iteration, static_cast<std::uint64_t>(j),
                                        static_cast<std::uint64_t>(e)}));
      Trajectory tr = rollout(env_config, jobsets[j], params, rng, config.max_episode_length);
      tr.jobset_id = j;
      tr.returns = compute_returns(tr.rewards, config.discount);
      batch.push_back(std::move(tr));
    }
  });

  std::size_t total_steps = 0;
  for (const auto& batch : batches)
    for (const auto& tr : batch) total_steps += tr.size();
  const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(total_steps, 1));

  // One partial gradient per jobset, summed in jobset order, so the result
  // does not depend on the number of workers.
  const PreparedPolicy policy = prepare(params);
  std::vector<Gradient> partial(num_jobsets);
  parallel_for(num_jobsets, config.threads, [&](int j) {
    const auto advantages = compute_advantages(batches[j]);
    GradientAccumulator acc(params.config);
    ForwardTrace trace;
    for (std::size_t k = 0; k < batches[j].size(); ++k) {
      const Trajectory& tr = batches[j][k];
      for (std::size_t t = 0; t < tr.size(); ++t) {
        const double weight = advantages[k][t] * scale;
        if (!std::isfinite(weight)) throw NumericError("non-finite advantage");
        if (weight == 0.0) continue;
        forward(tr.observations[t], policy, trace);
        acc.add(trace, params, tr.actions[t], weight);
      }
    }
    partial[j] = acc.take();
  });
  Gradient total = std::move(partial[0]);
  for (int j = 1; j < num_jobsets; ++j) total += partial[j];

  PolicyParams updated = params;
  apply_update(updated, total);
  updated.iteration = iteration + 1;
  params = std::move(updated);

  IterationReport report;
  report.iteration = iteration + 1;
  double reward_sum = 0.0;
  double length_sum = 0.0;
  double slowdown_sum = 0.0;
  int slowdown_count = 0;
  int trajectories = 0;
  for (const auto& batch : batches) {
    for (const auto& tr : batch) {
      ++trajectories;
      reward_sum += tr.returns.empty() ? 0.0 : tr.returns.front();
      length_sum += static_cast<double>(tr.size());
      if (auto m = tr.summary.mean_slowdown()) {
        slowdown_sum += *m;
        ++slowdown_count;
      }
      report.truncated_jobs += tr.summary.jobs_truncated;
      report.dropped_jobs += tr.summary.jobs_dropped;
    }
  }
  report.mean_total_reward = reward_sum / trajectories;
  report.mean_episode_length = length_sum / trajectories;
  if (slowdown_count > 0) report.mean_slowdown = slowdown_sum / slowdown_count;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

EpisodeSummary run_greedy_episode(const PolicyParams& params, const JobSet& jobset, const EnvConfig& env_config,
                                  int max_len) {
  Environment env(env_config);
  Observation obs = env.reset(jobset);
  ForwardTrace trace;
  double total = 0.0;
  int decisions = 0;
  const PreparedPolicy policy = prepare(params);
  while (!env.done() && decisions < max_len) {
    forward(obs, policy, trace);
    StepResult res = env.step(greedy_action(trace.probs));
    total += res.reward;
    ++decisions;
    obs = std::move(res.observation);
  }
  return summarize_episode(env, total, decisions);
}

EvalSummary evaluate(const PolicyParams& params, std::span<const JobSet> jobsets, const EnvConfig& env_config,
                     int max_len) {
  std::vector<EpisodeSummary> episodes;
  episodes.reserve(jobsets.size());
  for (const JobSet& js : jobsets) episodes.push_back(run_greedy_episode(params, js, env_config, max_len));
  return aggregate(episodes);
}

}  // namespace drlsched
