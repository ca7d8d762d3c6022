#include "drlsched/harness/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "drlsched/baselines.hpp"
#include "drlsched/errors.hpp"

namespace drlsched::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

// Keeps the header and rows whose first column is <= last_iteration, so a
// resumed run continues right after its checkpoint.
void truncate_csv(const fs::path& path, std::uint64_t last_iteration, const char* header) {
  std::vector<std::string> kept{header};
  if (fs::exists(path)) {
    auto lines = read_lines(path);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto comma = lines[i].find(',');
      if (comma == std::string::npos) continue;
      if (std::stoull(lines[i].substr(0, comma)) <= last_iteration) kept.push_back(lines[i]);
    }
  }
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : kept) out << l << '\n';
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path.string());
  out << line << '\n';
}

std::string checkpoint_name(std::uint64_t iteration) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checkpoint_%04llu.ckpt", static_cast<unsigned long long>(iteration));
  return buf;
}

constexpr const char* kEvalHeader = "iteration,mean_slowdown,std_slowdown,mean_reward,jobs_dropped";

}  // namespace

std::vector<JobSet> training_jobsets(const WorkloadParams& workload, std::uint64_t iteration, int count) {
  std::vector<JobSet> out;
  for (int k = 0; k < count; ++k) {
    WorkloadParams p = workload;
    p.seed = derive_seed(workload.seed, {stream::kTrainJobset, iteration, static_cast<std::uint64_t>(k)});
    out.push_back(generate_jobset(p));
  }
  return out;
}

std::vector<JobSet> heldout_jobsets(const WorkloadParams& workload, int count) {
  std::vector<JobSet> out;
  for (int k = 0; k < count; ++k) {
    WorkloadParams p = workload;
    p.seed = derive_seed(workload.seed, {stream::kEvalJobset, static_cast<std::uint64_t>(k)});
    out.push_back(generate_jobset(p));
  }
  return out;
}

std::vector<fs::path> cmd_generate(const WorkloadParams& workload, int count, const fs::path& out_dir) {
  if (count < 0) throw ParameterError("--num-jobsets must be >= 0");
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (int k = 0; k < count; ++k) {
    WorkloadParams p = workload;
    p.seed = derive_seed(workload.seed, {stream::kGenerate, static_cast<std::uint64_t>(k)});
    char name[32];
    std::snprintf(name, sizeof name, "jobset_%04d.txt", k);
    const fs::path path = out_dir / name;
    save_jobset(generate_jobset(p), path);
    written.push_back(path);
  }
  return written;
}

std::vector<ComparisonRow> compare(const ExperimentConfig& config, const PolicyParams& params,
                                   const std::vector<JobSet>& jobsets) {
  const int max_len = config.train.max_episode_length;
  std::vector<ComparisonRow> rows;
  rows.push_back({"drl", evaluate(params, jobsets, config.env, max_len)});
  for (HeuristicKind kind : {HeuristicKind::sjf, HeuristicKind::packer, HeuristicKind::random}) {
    std::vector<EpisodeSummary> eps;
    for (std::size_t k = 0; k < jobsets.size(); ++k) {
      Rng rng(derive_seed(config.train.seed, {stream::kHeuristic, static_cast<std::uint64_t>(kind), k}));
      eps.push_back(run_heuristic_episode(config.env, jobsets[k], kind, rng, max_len));
    }
    rows.push_back({std::string(to_string(kind)), aggregate(eps)});
  }
  std::vector<EpisodeSummary> eps;
  for (std::size_t k = 0; k < jobsets.size(); ++k) {
    Rng rng(derive_seed(config.train.seed, {stream::kHeuristic, 99, k}));
    eps.push_back(run_uniform_policy_episode(config.env, jobsets[k], rng, max_len));
  }
  rows.push_back({"uniform", aggregate(eps)});
  return rows;
}

std::string format_comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << kComparisonHeader << '\n';
  for (const auto& r : rows)
    os << r.scheduler << ',' << fmt_optional(r.summary.mean_slowdown) << ',' << fmt_double(r.summary.std_slowdown)
       << ',' << fmt_double(r.summary.mean_reward) << ',' << r.summary.jobs_dropped << '\n';
  return os.str();
}

std::string format_comparison_text(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "scheduler" << std::right << std::setw(14) << "mean slowdown" << std::setw(10)
     << "std" << std::setw(14) << "mean reward" << std::setw(10) << "dropped" << '\n';
  os << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << r.scheduler << std::right << std::setw(14);
    if (r.summary.mean_slowdown)
      os << *r.summary.mean_slowdown;
    else
      os << "n/a";
    os << std::setw(10) << r.summary.std_slowdown << std::setw(14) << r.summary.mean_reward << std::setw(10)
       << r.summary.jobs_dropped << '\n';
  }
  return os.str();
}

int cmd_train(const ExperimentConfig& config_in, const TrainOptions& options, std::ostream& log) {
  ExperimentConfig config = config_in;
  if (options.iterations) config.train.num_iterations = *options.iterations;
  config.validate();
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  const fs::path metrics = out / "metrics.csv";
  const fs::path evals = out / "eval.csv";
  const fs::path latest = out / "latest.ckpt";

  PolicyParams params;
  if (options.resume) {
    const fs::path from = options.checkpoint.value_or(latest);
    params = load_params(from, config.net);
    params.config = config.net;
    log << "resuming from " << from.string() << " at iteration " << params.iteration << '\n';
  } else {
    params = init_params(config.net, config.train.seed);
  }
  truncate_csv(metrics, params.iteration, kMetricsHeader);
  truncate_csv(evals, params.iteration, kEvalHeader);
  {
    std::ofstream cfg(out / "config.used.cfg", std::ios::trunc);
    cfg << format_config(config);
  }

  const auto heldout = heldout_jobsets(config.workload, config.eval_jobsets);
  const auto total = static_cast<std::uint64_t>(config.train.num_iterations);
  while (params.iteration < total) {
    const auto jobsets = training_jobsets(config.workload, params.iteration, config.train.jobsets_per_iteration);
    IterationReport rep = train_iteration(params, jobsets, config.env, config.train);
    const std::uint64_t done = params.iteration;
    append_line(metrics, std::to_string(done) + ',' + fmt_double(rep.mean_total_reward) + ',' +
                             fmt_optional(rep.mean_slowdown) + ',' + fmt_double(rep.mean_episode_length) + ',' +
                             fmt_double(config.record_wall_time ? rep.wall_time : 0.0));
    save_params(params, latest);
    log << "iter " << done << "  reward " << std::fixed << std::setprecision(3) << rep.mean_total_reward
        << "  slowdown " << rep.mean_slowdown.value_or(0.0) << "  length " << rep.mean_episode_length << "  ("
        << std::setprecision(2) << rep.wall_time << " s)\n";
    log.unsetf(std::ios::floatfield);

    // Keyed on the iteration number alone so a resumed run writes the same rows.
    if (done % static_cast<std::uint64_t>(config.train.eval_every) == 0) {
      save_params(params, out / checkpoint_name(done));
      if (!heldout.empty()) {
        const EvalSummary ev = evaluate(params, heldout, config.env, config.train.max_episode_length);
        append_line(evals, std::to_string(done) + ',' + fmt_optional(ev.mean_slowdown) + ',' +
                               fmt_double(ev.std_slowdown) + ',' + fmt_double(ev.mean_reward) + ',' +
                               std::to_string(ev.jobs_dropped));
        log << "  held-out greedy slowdown " << ev.mean_slowdown.value_or(0.0) << '\n';
      }
    }
  }

  if (options.final_report && !heldout.empty()) {
    const auto rows = compare(config, params, heldout);
    std::ofstream(out / "final_report.csv", std::ios::trunc) << format_comparison_csv(rows);
    log << format_comparison_text(rows);
  }
  return 0;
}

int cmd_compare(const ExperimentConfig& config, const fs::path& checkpoint, int num_jobsets, std::ostream& log) {
  if (num_jobsets < 1) throw ParameterError("--num-jobsets must be >= 1");
  PolicyParams params = load_params(checkpoint, config.net);
  params.config = config.net;
  const auto rows = compare(config, params, heldout_jobsets(config.workload, num_jobsets));
  fs::create_directories(config.output_dir);
  std::ofstream(config.output_dir / "comparison.csv", std::ios::trunc) << format_comparison_csv(rows);
  log << format_comparison_text(rows);
  return 0;
}

int cmd_evaluate(const ExperimentConfig& config, const fs::path& checkpoint, int num_jobsets, std::ostream& log) {
  if (num_jobsets < 1) throw ParameterError("--num-jobsets must be >= 1");
  PolicyParams params = load_params(checkpoint, config.net);
  params.config = config.net;
  const EvalSummary ev =
      evaluate(params, heldout_jobsets(config.workload, num_jobsets), config.env, config.train.max_episode_length);
  fs::create_directories(config.output_dir);
  std::ofstream(config.output_dir / "evaluation.csv", std::ios::trunc)
      << "episodes,mean_slowdown,std_slowdown,mean_reward,jobs_dropped,jobs_truncated\n"
      << ev.episodes << ',' << fmt_optional(ev.mean_slowdown) << ',' << fmt_double(ev.std_slowdown) << ','
      << fmt_double(ev.mean_reward) << ',' << ev.jobs_dropped << ',' << ev.jobs_truncated << '\n';
  log << "greedy evaluation over " << ev.episodes << " held-out jobsets: mean slowdown "
      << (ev.mean_slowdown ? fmt_double(*ev.mean_slowdown) : std::string("n/a")) << ", mean reward "
      << ev.mean_reward << ", dropped " << ev.jobs_dropped << '\n';
  return 0;
}

}  // namespace drlsched::harness
