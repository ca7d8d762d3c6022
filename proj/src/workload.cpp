#include "drlsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "drlsched/errors.hpp"
#include "drlsched/rng.hpp"

namespace drlsched {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ParameterError("workload." + field + ": " + why);
}

int demand_units(double fraction, int capacity) {
  const int units = static_cast<int>(std::ceil(fraction * capacity - 1e-9));
  return std::clamp(units, 1, capacity);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

int parse_int(const std::string& tok, int line, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size()) throw ParseError(std::string("bad ") + what + " '" + tok + "'", line);
  return v;
}

}  // namespace

void WorkloadParams::validate() const {
  require(arrival_rate >= 0.0 && arrival_rate <= 1.0, "arrival_rate", "must lie in [0,1]");
  require(short_fraction >= 0.0 && short_fraction <= 1.0, "short_fraction", "must lie in [0,1]");
  require(short_duration.min >= 1 && short_duration.min <= short_duration.max, "short_duration",
          "needs 1 <= min <= max");
  require(long_duration.min >= 1 && long_duration.min <= long_duration.max, "long_duration",
          "needs 1 <= min <= max");
  require(dominant_demand.min > 0.0 && dominant_demand.min <= dominant_demand.max, "dominant_demand",
          "needs 0 < min <= max");
  require(dominant_demand.max <= 1.0, "dominant_demand", "max must not exceed 1.0 of capacity");
  require(other_demand.min > 0.0 && other_demand.min <= other_demand.max, "other_demand",
          "needs 0 < min <= max");
  require(other_demand.max <= 1.0, "other_demand", "max must not exceed 1.0 of capacity");
  require(num_resources >= 1, "num_resources", "must be >= 1");
  require(static_cast<int>(capacity.size()) == num_resources, "capacity",
          "needs exactly num_resources entries");
  for (int c : capacity) require(c >= 1, "capacity", "entries must be >= 1");
  require(arrival_window >= 0, "arrival_window", "must be >= 0");
}

int WorkloadParams::max_duration() const {
  return std::max(short_duration.max, long_duration.max);
}

bool operator==(const JobSet& a, const JobSet& b) {
  return a.jobs == b.jobs && a.params.num_resources == b.params.num_resources &&
         a.params.capacity == b.params.capacity;
}

JobSet generate_jobset(const WorkloadParams& params) {
  params.validate();
  JobSet out;
  out.params = params;
  Rng rng(derive_seed(params.seed, {stream::kGenerate}));
  const int d = params.num_resources;
  int next_id = 0;
  for (int t = 0; t < params.arrival_window; ++t) {
    if (!(uniform01(rng) < params.arrival_rate)) continue;
    Job job;
    job.id = next_id++;
    job.arrival_time = t;
    const bool is_short = uniform01(rng) < params.short_fraction;
    const IntRange& dur = is_short ? params.short_duration : params.long_duration;
    job.duration = uniform_int(rng, dur.min, dur.max);
    const int dominant = uniform_int(rng, 0, d - 1);
    job.demand.resize(d);
    for (int r = 0; r < d; ++r) {
      const RealRange& range = r == dominant ? params.dominant_demand : params.other_demand;
      const double frac = range.min + (range.max - range.min) * uniform01(rng);
      job.demand[r] = demand_units(frac, params.capacity[r]);
    }
    out.jobs.push_back(std::move(job));
  }
  return out;
}

std::string format_jobset(const JobSet& jobset) {
  std::ostringstream os;
  os << "jobset v1 d=" << jobset.params.num_resources << " cap=";
  for (std::size_t r = 0; r < jobset.params.capacity.size(); ++r) {
    if (r) os << ',';
    os << jobset.params.capacity[r];
  }
  os << '\n';
  for (const Job& j : jobset.jobs) {
    os << j.id << ' ' << j.arrival_time << ' ' << j.duration;
    for (int u : j.demand) os << ' ' << u;
    os << '\n';
  }
  return os.str();
}

void save_jobset(const JobSet& jobset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_jobset(jobset);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

JobSet parse_jobset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  JobSet out;
  bool have_header = false;
  std::set<int> ids;
  int last_arrival = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "jobset" || tok[1] != "v1" || tok[2].rfind("d=", 0) != 0 ||
          tok[3].rfind("cap=", 0) != 0)
        throw ParseError("expected header 'jobset v1 d=<d> cap=<c1,...>'", lineno);
      const int d = parse_int(tok[2].substr(2), lineno, "resource count");
      if (d < 1) throw ParseError("resource count must be >= 1", lineno);
      std::vector<int> cap;
      for (const auto& c : split(tok[3].substr(4), ',')) cap.push_back(parse_int(c, lineno, "capacity"));
      if (static_cast<int>(cap.size()) != d) throw ParseError("capacity list length != d", lineno);
      for (int c : cap)
        if (c < 1) throw ParseError("capacity must be >= 1", lineno);
      out.params.num_resources = d;
      out.params.capacity = cap;
      have_header = true;
      continue;
    }

    const int d = out.params.num_resources;
    if (static_cast<int>(tok.size()) != 3 + d)
      throw ParseError("expected " + std::to_string(3 + d) + " fields, got " + std::to_string(tok.size()),
                       lineno);
    Job job;
    job.id = parse_int(tok[0], lineno, "id");
    job.arrival_time = parse_int(tok[1], lineno, "arrival");
    job.duration = parse_int(tok[2], lineno, "duration");
    if (job.arrival_time < 0) throw ParseError("negative arrival time", lineno);
    if (job.duration < 1) throw ParseError("duration must be >= 1", lineno);
    if (!out.jobs.empty() && job.arrival_time < last_arrival)
      throw ParseError("arrival times must be nondecreasing", lineno);
    if (!ids.insert(job.id).second) throw ParseError("duplicate job id " + tok[0], lineno);
    for (int r = 0; r < d; ++r) {
      const int u = parse_int(tok[3 + r], lineno, "demand");
      if (u < 1 || u > out.params.capacity[r]) throw ParseError("demand outside [1, capacity]", lineno);
      job.demand.push_back(u);
    }
    last_arrival = job.arrival_time;
    out.jobs.push_back(std::move(job));
  }
  if (!have_header) throw ParseError("missing jobset header", std::max(lineno, 1));
  return out;
}

JobSet load_jobset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_jobset(ss.str());
}

}  // namespace drlsched
