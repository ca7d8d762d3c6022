#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "drlsched/environment.hpp"
#include "drlsched/rng.hpp"

namespace drlsched {

/// One valid convolution (num_filters kernels of kernel_size^2, ReLU) followed by
/// a fully-connected softmax head over num_actions = m*q + 1 actions.
struct NetConfig {
  int input_rows = 20;
  int input_cols = 124;
  int kernel_size = 3;
  int num_filters = 16;
  int num_actions = 6;
  double learning_rate = 1e-3;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;

  /// Throws ConfigError.
  void validate() const;

  int conv_rows() const { return input_rows - kernel_size + 1; }
  int conv_cols() const { return input_cols - kernel_size + 1; }
  std::size_t hidden_size() const {
    return static_cast<std::size_t>(num_filters) * conv_rows() * conv_cols();
  }

  bool operator==(const NetConfig&) const = default;
};

/// Input geometry and action count implied by an environment.
NetConfig net_config_for(const EnvConfig& env);

/// All trainable tensors, also used as the gradient type.
///   conv_kernels  [filter][kr][kc]
///   conv_bias     [filter]
///   fc_weights    [hidden][action], hidden = (filter * conv_rows + r) * conv_cols + c
///   fc_bias       [action]
struct ParamTensors {
  std::vector<double> conv_kernels;
  std::vector<double> conv_bias;
  std::vector<double> fc_weights;
  std::vector<double> fc_bias;

  static ParamTensors zeros(const NetConfig& config);

  /// The four tensors in checkpoint order.
  std::array<std::span<double>, 4> tensors();
  std::array<std::span<const double>, 4> tensors() const;

  std::size_t size() const;
  bool all_finite() const;
  void scale(double factor);
  ParamTensors& operator+=(const ParamTensors& other);

  bool operator==(const ParamTensors&) const = default;
};

using Gradient = ParamTensors;

struct PolicyParams {
  NetConfig config;
  ParamTensors weights;
  ParamTensors sq_avg;          ///< rmsprop accumulators
  std::uint64_t iteration = 0;  ///< number of updates applied

  bool operator==(const PolicyParams&) const = default;
};

/// Kernels and fc weights ~ N(0, 1/fan_in); biases and accumulators zero.
PolicyParams init_params(const NetConfig& config, std::uint64_t seed);
PolicyParams zero_params(const NetConfig& config);

/// Parameters plus, per filter and action, the fc weights summed over the
/// whole output plane. Build once per parameter version; the weights must
/// outlive it.
struct PreparedPolicy {
  const PolicyParams* params = nullptr;
  std::vector<double> plane_sums;  ///< [filter][action]
};

/// Runs check_finite, then computes the plane sums.
PreparedPolicy prepare(const PolicyParams& params);

/// A conv unit whose window covers only zeros has pre-activation equal to its
/// filter's bias. For filters with positive bias those "background" units are
/// all active with the same value and are handled in bulk: `active` lists only
/// positive units among the touched positions, and `background` holds their
/// fc weights summed per filter.
struct ForwardTrace {
  Observation input;
  std::vector<double> pre_activation;  ///< [filter][r][c]
  std::vector<double> hidden;          ///< ReLU(pre_activation), every unit
  std::vector<std::uint32_t> touched;  ///< plane positions whose window has a nonzero input, ascending
  std::vector<std::uint32_t> active;   ///< touched units with pre_activation > 0, ascending
  std::vector<double> background;      ///< [filter][action]; zero for filters with bias <= 0
  std::vector<double> logits;
  std::vector<double> probs;
  std::vector<double> filled_bias;     ///< biases the untouched units were filled with
};

/// Valid convolution + ReLU. Throws ConfigError on shape mismatch.
std::vector<double> conv_forward(const Observation& image, const PolicyParams& params);

/// Throws ConfigError on shape mismatch, NumericError on non-finite parameters.
ForwardTrace forward(const Observation& observation, const PolicyParams& params);
/// Same as above, reusing the buffers of `trace`.
void forward(const Observation& observation, const PolicyParams& params, ForwardTrace& trace);
void forward(const Observation& observation, const PreparedPolicy& policy, ForwardTrace& trace);

/// Throws NumericError if any parameter is NaN or infinite.
void check_finite(const PolicyParams& params);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

int sample_action(std::span<const double> probs, Rng& rng);
/// Lowest index among the maxima.
int greedy_action(std::span<const double> probs);

/// Sums weight * d log probs[action] / d params over many traces. The
/// background units' fc gradient is kept per filter and spread over the plane
/// by take().
class GradientAccumulator {
 public:
  explicit GradientAccumulator(const NetConfig& config);

  void add(const ForwardTrace& trace, const PolicyParams& params, int action, double weight);
  Gradient take();

 private:
  NetConfig config_;
  Gradient grad_;
  std::vector<double> broadcast_;  ///< [filter][action]
};

/// Gradient of sum_t advantage_t * log probs_t[action_t] (ascent direction).
/// Throws DomainError if the lengths differ.
Gradient policy_gradient(const PolicyParams& params, std::span<const ForwardTrace> traces,
                         std::span<const int> actions, std::span<const double> advantages);

/// RMSprop ascent step:
///   acc = decay * acc + (1 - decay) * g^2;  w += lr * g / sqrt(acc + eps)
/// Throws NumericError (leaving params untouched) if the gradient is not finite.
void apply_update(PolicyParams& params, const Gradient& gradient);

/// Binary checkpoint; see README for the layout.
void save_params(const PolicyParams& params, const std::filesystem::path& path);
/// Throws FormatError on truncation, bad magic or checksum mismatch.
PolicyParams load_params(const std::filesystem::path& path);
/// Additionally throws ShapeError when the stored geometry differs from `expected`.
PolicyParams load_params(const std::filesystem::path& path, const NetConfig& expected);

}  // namespace drlsched
