#include "drlsched/harness/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "drlsched/errors.hpp"

namespace drlsched::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string key;
  std::string value;
  int line;
};

template <typename T>
T parse_scalar(const Entry& e) {
  std::istringstream in(e.value);
  T v{};
  in >> v;
  std::string rest;
  if (in.fail() || (in >> rest)) throw ParseError("key '" + e.key + "': cannot parse '" + e.value + "'", e.line);
  return v;
}

template <>
bool parse_scalar<bool>(const Entry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ParseError("key '" + e.key + "': expected true/false, got '" + e.value + "'", e.line);
}

template <typename T>
std::vector<T> parse_list(const Entry& e) {
  std::vector<T> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_scalar<T>(Entry{e.key, trim(item), e.line}));
  if (out.empty()) throw ParseError("key '" + e.key + "': empty list", e.line);
  return out;
}

template <typename T>
std::pair<T, T> parse_pair(const Entry& e) {
  auto v = parse_list<T>(e);
  if (v.size() != 2) throw ParseError("key '" + e.key + "': expected 'min,max'", e.line);
  return {v[0], v[1]};
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  env.validate();
  net.validate();
  train.validate();
  try {
    workload.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (workload.num_resources != env.num_resources || workload.capacity != env.capacity)
    throw ConfigError("workload resources/capacity disagree with env.num_resources/env.capacity");
  if (env.lookahead_horizon < workload.max_duration())
    throw ConfigError("env.lookahead_horizon (" + std::to_string(env.lookahead_horizon) +
                      ") is shorter than the longest workload duration (" + std::to_string(workload.max_duration()) + ")");
  if (net.input_rows != env.observation_rows() || net.input_cols != env.observation_cols())
    throw ConfigError("net.input_rows x net.input_cols = " + std::to_string(net.input_rows) + "x" +
                      std::to_string(net.input_cols) + " but env implies an observation of " +
                      std::to_string(env.observation_rows()) + "x" + std::to_string(env.observation_cols()));
  if (net.num_actions != env.action_count())
    throw ConfigError("net.num_actions = " + std::to_string(net.num_actions) +
                      " but env.num_machines * env.queue_length + 1 = " + std::to_string(env.action_count()));
  if (eval_jobsets < 0) throw ConfigError("train.eval_jobsets must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::optional<int> input_rows, input_cols, num_actions;
  bool alpha_given = false;

  using Setter = std::function<void(const Entry&)>;
  const std::map<std::string, Setter> setters = {
      {"env.num_machines", [&](const Entry& e) { cfg.env.num_machines = parse_scalar<int>(e); }},
      {"env.num_resources", [&](const Entry& e) { cfg.env.num_resources = parse_scalar<int>(e); }},
      {"env.capacity", [&](const Entry& e) { cfg.env.capacity = parse_list<int>(e); }},
      {"env.lookahead_horizon", [&](const Entry& e) { cfg.env.lookahead_horizon = parse_scalar<int>(e); }},
      {"env.queue_length", [&](const Entry& e) { cfg.env.queue_length = parse_scalar<int>(e); }},
      {"env.backlog_capacity", [&](const Entry& e) { cfg.env.backlog_capacity = parse_scalar<int>(e); }},
      {"env.max_episode_length", [&](const Entry& e) { cfg.env.max_episode_length = parse_scalar<int>(e); }},
      {"env.alpha",
       [&](const Entry& e) {
         cfg.env.reward_weights.alpha = parse_list<double>(e);
         alpha_given = true;
       }},
      {"env.beta", [&](const Entry& e) { cfg.env.reward_weights.beta = parse_scalar<double>(e); }},
      {"env.gamma", [&](const Entry& e) { cfg.env.reward_weights.gamma_weight = parse_scalar<double>(e); }},

      {"workload.arrival_rate", [&](const Entry& e) { cfg.workload.arrival_rate = parse_scalar<double>(e); }},
      {"workload.short_fraction", [&](const Entry& e) { cfg.workload.short_fraction = parse_scalar<double>(e); }},
      {"workload.short_duration",
       [&](const Entry& e) {
         auto [lo, hi] = parse_pair<int>(e);
         cfg.workload.short_duration = {lo, hi};
       }},
      {"workload.long_duration",
       [&](const Entry& e) {
         auto [lo, hi] = parse_pair<int>(e);
         cfg.workload.long_duration = {lo, hi};
       }},
      {"workload.dominant_demand",
       [&](const Entry& e) {
         auto [lo, hi] = parse_pair<double>(e);
         cfg.workload.dominant_demand = {lo, hi};
       }},
      {"workload.other_demand",
       [&](const Entry& e) {
         auto [lo, hi] = parse_pair<double>(e);
         cfg.workload.other_demand = {lo, hi};
       }},
      {"workload.arrival_window", [&](const Entry& e) { cfg.workload.arrival_window = parse_scalar<int>(e); }},
      {"workload.seed", [&](const Entry& e) { cfg.workload.seed = parse_scalar<std::uint64_t>(e); }},

      {"net.input_rows", [&](const Entry& e) { input_rows = parse_scalar<int>(e); }},
      {"net.input_cols", [&](const Entry& e) { input_cols = parse_scalar<int>(e); }},
      {"net.num_actions", [&](const Entry& e) { num_actions = parse_scalar<int>(e); }},
      {"net.kernel_size", [&](const Entry& e) { cfg.net.kernel_size = parse_scalar<int>(e); }},
      {"net.num_filters", [&](const Entry& e) { cfg.net.num_filters = parse_scalar<int>(e); }},
      {"net.learning_rate", [&](const Entry& e) { cfg.net.learning_rate = parse_scalar<double>(e); }},
      {"net.rmsprop_decay", [&](const Entry& e) { cfg.net.rmsprop_decay = parse_scalar<double>(e); }},
      {"net.rmsprop_epsilon", [&](const Entry& e) { cfg.net.rmsprop_epsilon = parse_scalar<double>(e); }},

      {"train.num_iterations", [&](const Entry& e) { cfg.train.num_iterations = parse_scalar<int>(e); }},
      {"train.jobsets_per_iteration", [&](const Entry& e) { cfg.train.jobsets_per_iteration = parse_scalar<int>(e); }},
      {"train.episodes_per_jobset", [&](const Entry& e) { cfg.train.episodes_per_jobset = parse_scalar<int>(e); }},
      {"train.discount", [&](const Entry& e) { cfg.train.discount = parse_scalar<double>(e); }},
      {"train.max_episode_length", [&](const Entry& e) { cfg.train.max_episode_length = parse_scalar<int>(e); }},
      {"train.eval_every", [&](const Entry& e) { cfg.train.eval_every = parse_scalar<int>(e); }},
      {"train.seed", [&](const Entry& e) { cfg.train.seed = parse_scalar<std::uint64_t>(e); }},
      {"train.threads", [&](const Entry& e) { cfg.train.threads = parse_scalar<int>(e); }},
      {"train.eval_jobsets", [&](const Entry& e) { cfg.eval_jobsets = parse_scalar<int>(e); }},
      {"train.record_wall_time", [&](const Entry& e) { cfg.record_wall_time = parse_scalar<bool>(e); }},

      {"output.dir", [&](const Entry& e) { cfg.output_dir = e.value; }},
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'section.key = value'", lineno);
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (e.value.empty()) throw ParseError("key '" + e.key + "' has no value", lineno);
    const auto it = setters.find(e.key);
    if (it == setters.end()) throw ParseError("unknown key '" + e.key + "'", lineno);
    if (auto [pos, fresh] = seen.emplace(e.key, lineno); !fresh)
      throw ParseError("key '" + e.key + "' repeated (first on line " + std::to_string(pos->second) + ")", lineno);
    it->second(e);
  }

  if (!alpha_given) cfg.env.reward_weights.alpha.assign(std::max(cfg.env.num_machines, 0), 1.0);
  cfg.workload.num_resources = cfg.env.num_resources;
  cfg.workload.capacity = cfg.env.capacity;
  cfg.net.input_rows = input_rows.value_or(cfg.env.observation_rows());
  cfg.net.input_cols = input_cols.value_or(cfg.env.lookahead_horizon > 0 ? cfg.env.observation_cols() : 0);
  cfg.net.num_actions = num_actions.value_or(cfg.env.action_count());
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "env.num_machines = " << c.env.num_machines << '\n'
     << "env.num_resources = " << c.env.num_resources << '\n'
     << "env.capacity = " << join(c.env.capacity) << '\n'
     << "env.lookahead_horizon = " << c.env.lookahead_horizon << '\n'
     << "env.queue_length = " << c.env.queue_length << '\n'
     << "env.backlog_capacity = " << c.env.backlog_capacity << '\n'
     << "env.max_episode_length = " << c.env.max_episode_length << '\n'
     << "env.alpha = " << join(c.env.reward_weights.alpha) << '\n'
     << "env.beta = " << c.env.reward_weights.beta << '\n'
     << "env.gamma = " << c.env.reward_weights.gamma_weight << '\n'
     << "workload.arrival_rate = " << c.workload.arrival_rate << '\n'
     << "workload.short_fraction = " << c.workload.short_fraction << '\n'
     << "workload.short_duration = " << c.workload.short_duration.min << ',' << c.workload.short_duration.max << '\n'
     << "workload.long_duration = " << c.workload.long_duration.min << ',' << c.workload.long_duration.max << '\n'
     << "workload.dominant_demand = " << c.workload.dominant_demand.min << ',' << c.workload.dominant_demand.max << '\n'
     << "workload.other_demand = " << c.workload.other_demand.min << ',' << c.workload.other_demand.max << '\n'
     << "workload.arrival_window = " << c.workload.arrival_window << '\n'
     << "workload.seed = " << c.workload.seed << '\n'
     << "net.input_rows = " << c.net.input_rows << '\n'
     << "net.input_cols = " << c.net.input_cols << '\n'
     << "net.num_actions = " << c.net.num_actions << '\n'
     << "net.kernel_size = " << c.net.kernel_size << '\n'
     << "net.num_filters = " << c.net.num_filters << '\n'
     << "net.learning_rate = " << c.net.learning_rate << '\n'
     << "net.rmsprop_decay = " << c.net.rmsprop_decay << '\n'
     << "net.rmsprop_epsilon = " << c.net.rmsprop_epsilon << '\n'
     << "train.num_iterations = " << c.train.num_iterations << '\n'
     << "train.jobsets_per_iteration = " << c.train.jobsets_per_iteration << '\n'
     << "train.episodes_per_jobset = " << c.train.episodes_per_jobset << '\n'
     << "train.discount = " << c.train.discount << '\n'
     << "train.max_episode_length = " << c.train.max_episode_length << '\n'
     << "train.eval_every = " << c.train.eval_every << '\n'
     << "train.seed = " << c.train.seed << '\n'
     << "train.threads = " << c.train.threads << '\n'
     << "train.eval_jobsets = " << c.eval_jobsets << '\n'
     << "train.record_wall_time = " << (c.record_wall_time ? "true" : "false") << '\n'
     << "output.dir = " << c.output_dir.string() << '\n';
  return os.str();
}

}  // namespace drlsched::harness
