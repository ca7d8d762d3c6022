#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace drlsched {

struct IntRange {
  int min = 0;
  int max = 0;

  bool contains(int v) const { return v >= min && v <= max; }
  bool operator==(const IntRange&) const = default;
};

struct RealRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const RealRange&) const = default;
};

/// Parameters of the synthetic workload. Defaults:
/// two resources of 10 units, 80% short jobs (1-3 steps), long jobs of 10-15 steps,
/// a dominant resource drawing 25-50% of capacity and the rest 5-10%.
struct WorkloadParams {
  double arrival_rate = 0.7;
  double short_fraction = 0.8;
  IntRange short_duration{1, 3};
  IntRange long_duration{10, 15};
  RealRange dominant_demand{0.25, 0.5};
  RealRange other_demand{0.05, 0.1};
  int num_resources = 2;
  std::vector<int> capacity{10, 10};
  int arrival_window = 50;
  std::uint64_t seed = 42;

  /// Throws ParameterError naming the first offending field.
  void validate() const;

  int max_duration() const;

  bool operator==(const WorkloadParams&) const = default;
};

struct Job {
  int id = 0;
  int arrival_time = 0;
  int duration = 1;
  std::vector<int> demand;
  std::optional<int> schedule_time;
  std::optional<int> assigned_machine;
  std::optional<int> finish_time;

  bool finished() const { return finish_time.has_value(); }
  bool operator==(const Job&) const = default;
};

struct JobSet {
  std::vector<Job> jobs;
  WorkloadParams params;
};

/// Only the parameters carried by the file header (d and capacity) take part in
/// equality, so load(save(x)) == x holds.
bool operator==(const JobSet& a, const JobSet& b);

/// Deterministic in params (including params.seed).
/// Bernoulli(arrival_rate) arrivals at t = 0 .. arrival_window-1, at most one per step.
JobSet generate_jobset(const WorkloadParams& params);

/// Line-oriented text:
///   jobset v1 d=<d> cap=<c1,...,cd>
///   <id> <arrival> <duration> <demand_1> ... <demand_d>
void save_jobset(const JobSet& jobset, const std::filesystem::path& path);
std::string format_jobset(const JobSet& jobset);

/// Throws ParseError carrying the 1-based line number.
JobSet load_jobset(const std::filesystem::path& path);
JobSet parse_jobset(const std::string& text);

}  // namespace drlsched
