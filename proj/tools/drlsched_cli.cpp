// Command-line front end: generate | train | evaluate | compare.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "drlsched/harness/commands.hpp"

namespace fs = std::filesystem;
using namespace drlsched;
using namespace drlsched::harness;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config, "Experiment config file (section.key = value lines)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Overrides workload.seed and train.seed");
  cmd->add_option("--out-dir", flags.out_dir, "Overrides output.dir");
}

ExperimentConfig resolve(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.config.empty() ? parse_config("") : load_config(flags.config);
  if (flags.seed) {
    cfg.workload.seed = *flags.seed;
    cfg.train.seed = *flags.seed;
  }
  if (flags.out_dir) cfg.output_dir = *flags.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep-RL multi-resource cluster scheduler"};
  app.require_subcommand(1);

  CommonFlags gen_flags;
  int num_jobsets = 10;
  auto* gen = app.add_subcommand("generate", "Write random jobset files");
  add_common(gen, gen_flags, false);
  gen->add_option("--num-jobsets", num_jobsets, "Number of jobsets to write")->check(CLI::NonNegativeNumber);

  CommonFlags train_flags;
  std::optional<int> iterations;
  bool resume = false;
  std::optional<std::string> train_ckpt;
  auto* train = app.add_subcommand("train", "Train the policy with REINFORCE");
  add_common(train, train_flags, true);
  train->add_option("--iterations", iterations, "Overrides train.num_iterations")->check(CLI::PositiveNumber);
  train->add_flag("--resume", resume, "Continue from <out-dir>/latest.ckpt (or --checkpoint)");
  train->add_option("--checkpoint", train_ckpt, "Checkpoint to resume from");

  CommonFlags eval_flags;
  std::string eval_ckpt;
  int eval_jobsets = 50;
  auto* eval = app.add_subcommand("evaluate", "Greedy evaluation of a checkpoint on held-out jobsets");
  add_common(eval, eval_flags, true);
  eval->add_option("--checkpoint", eval_ckpt, "Policy checkpoint")->required()->check(CLI::ExistingFile);
  eval->add_option("--num-jobsets", eval_jobsets, "Held-out jobsets")->check(CLI::PositiveNumber);

  CommonFlags cmp_flags;
  std::string cmp_ckpt;
  int cmp_jobsets = 50;
  auto* cmp = app.add_subcommand("compare", "Compare a checkpoint against SJF, Packer and random");
  add_common(cmp, cmp_flags, true);
  cmp->add_option("--checkpoint", cmp_ckpt, "Policy checkpoint")->required()->check(CLI::ExistingFile);
  cmp->add_option("--num-jobsets", cmp_jobsets, "Held-out jobsets")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ExperimentConfig cfg = resolve(gen_flags);
      const auto files = cmd_generate(cfg.workload, num_jobsets, cfg.output_dir);
      std::cout << "wrote " << files.size() << " jobsets to " << cfg.output_dir.string() << '\n';
      return 0;
    }
    if (*train) {
      TrainOptions opts;
      opts.iterations = iterations;
      opts.resume = resume;
      if (train_ckpt) opts.checkpoint = fs::path(*train_ckpt);
      return cmd_train(resolve(train_flags), opts, std::cout);
    }
    if (*eval) return cmd_evaluate(resolve(eval_flags), eval_ckpt, eval_jobsets, std::cout);
    if (*cmp) return cmd_compare(resolve(cmp_flags), cmp_ckpt, cmp_jobsets, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
