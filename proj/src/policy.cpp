#include "drlsched/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "drlsched/errors.hpp"

namespace drlsched {

void NetConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("net." + msg); };
  if (input_rows < 1 || input_cols < 1) fail("input shape must be positive");
  if (kernel_size < 1) fail("kernel_size must be >= 1");
  if (kernel_size > std::min(input_rows, input_cols)) fail("kernel_size exceeds input shape");
  if (num_filters < 1) fail("num_filters must be >= 1");
  if (num_actions < 2) fail("num_actions must be >= 2");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0)) fail("rmsprop_decay must lie in (0,1)");
  if (!(rmsprop_epsilon > 0.0)) fail("rmsprop_epsilon must be positive");
}

NetConfig net_config_for(const EnvConfig& env) {
  NetConfig net;
  net.input_rows = env.observation_rows();
  net.input_cols = env.observation_cols();
  net.num_actions = env.action_count();
  return net;
}

ParamTensors ParamTensors::zeros(const NetConfig& c) {
  ParamTensors t;
  t.conv_kernels.assign(static_cast<std::size_t>(c.num_filters) * c.kernel_size * c.kernel_size, 0.0);
  t.conv_bias.assign(c.num_filters, 0.0);
  t.fc_weights.assign(c.hidden_size() * c.num_actions, 0.0);
  t.fc_bias.assign(c.num_actions, 0.0);
  return t;
}

std::array<std::span<double>, 4> ParamTensors::tensors() {
  return {conv_kernels, conv_bias, fc_weights, fc_bias};
}

std::array<std::span<const double>, 4> ParamTensors::tensors() const {
  return {conv_kernels, conv_bias, fc_weights, fc_bias};
}

std::size_t ParamTensors::size() const {
  return conv_kernels.size() + conv_bias.size() + fc_weights.size() + fc_bias.size();
}

bool ParamTensors::all_finite() const {
  for (auto t : tensors())
    for (double v : t)
      if (!std::isfinite(v)) return false;
  return true;
}

void ParamTensors::scale(double factor) {
  for (auto t : tensors())
    for (double& v : t) v *= factor;
}

ParamTensors& ParamTensors::operator+=(const ParamTensors& other) {
  auto dst = tensors();
  auto src = other.tensors();
  for (std::size_t k = 0; k < dst.size(); ++k) {
    if (dst[k].size() != src[k].size()) throw ShapeError("gradient shape mismatch");
    for (std::size_t i = 0; i < dst[k].size(); ++i) dst[k][i] += src[k][i];
  }
  return *this;
}

PolicyParams zero_params(const NetConfig& config) {
  config.validate();
  PolicyParams p;
  p.config = config;
  p.weights = ParamTensors::zeros(config);
  p.sq_avg = ParamTensors::zeros(config);
  return p;
}

PolicyParams init_params(const NetConfig& config, std::uint64_t seed) {
  PolicyParams p = zero_params(config);
  Rng rng(derive_seed(seed, {stream::kInit}));
  // Box-Muller on our own uniforms so the draw is identical across standard libraries.
  auto normal = [&rng] {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  const double conv_scale = 1.0 / std::sqrt(static_cast<double>(config.kernel_size * config.kernel_size));
  for (double& w : p.weights.conv_kernels) w = normal() * conv_scale;
  const double fc_scale = 1.0 / std::sqrt(static_cast<double>(config.hidden_size()));
  for (double& w : p.weights.fc_weights) w = normal() * fc_scale;
  return p;
}

namespace {

void check_shape(const Observation& image, const NetConfig& c) {
  if (image.rows != c.input_rows || image.cols != c.input_cols ||
      image.cells.size() != static_cast<std::size_t>(image.rows) * image.cols)
    throw ConfigError("observation " + std::to_string(image.rows) + "x" + std::to_string(image.cols) +
                      " does not match network input " + std::to_string(c.input_rows) + "x" +
                      std::to_string(c.input_cols));
}

// Valid convolution written as a scatter from the nonzero input cells; the
// observation images are binary and mostly empty. `touched` receives, in
// ascending order, the output positions (within one plane) that some nonzero
// input reaches; every other position holds exactly the filter bias.
// Adds the kernel responses of the nonzero inputs to `pre`, which must already
// hold the biases, and lists the output positions that received any.
void scatter(const Observation& image, const PolicyParams& params, std::vector<double>& pre,
             std::vector<std::uint32_t>& touched) {
  const NetConfig& c = params.config;
  const int K = c.kernel_size;
  const int out_rows = c.conv_rows();
  const int out_cols = c.conv_cols();
  const std::size_t plane = static_cast<std::size_t>(out_rows) * out_cols;
  thread_local std::vector<std::uint8_t> mark;
  mark.assign(plane, 0);
  for (int r = 0; r < image.rows; ++r) {
    for (int col = 0; col < image.cols; ++col) {
      const double x = image.at(r, col);
      if (x == 0.0) continue;
      for (int kr = 0; kr < K; ++kr) {
        const int orow = r - kr;
        if (orow < 0 || orow >= out_rows) continue;
        for (int kc = 0; kc < K; ++kc) {
          const int ocol = col - kc;
          if (ocol < 0 || ocol >= out_cols) continue;
          const std::size_t pos = static_cast<std::size_t>(orow) * out_cols + ocol;
          mark[pos] = 1;
          for (int f = 0; f < c.num_filters; ++f)
            pre[f * plane + pos] += x * params.weights.conv_kernels[(f * K + kr) * K + kc];
        }
      }
    }
  }
  touched.clear();
  for (std::size_t pos = 0; pos < plane; ++pos)
    if (mark[pos]) touched.push_back(static_cast<std::uint32_t>(pos));
}

void convolve(const Observation& image, const PolicyParams& params, std::vector<double>& pre) {
  const NetConfig& c = params.config;
  const std::size_t plane = static_cast<std::size_t>(c.conv_rows()) * c.conv_cols();
  pre.resize(c.hidden_size());
  for (int f = 0; f < c.num_filters; ++f)
    std::fill_n(pre.begin() + static_cast<std::ptrdiff_t>(f * plane), plane, params.weights.conv_bias[f]);
  std::vector<std::uint32_t> touched;
  scatter(image, params, pre, touched);
}

// x * 0 is NaN exactly when x is not finite; the sum vectorizes, unlike isfinite.
bool all_finite_fast(std::span<const double> values) {
  double probe = 0.0;
  for (double v : values) probe += v * 0.0;
  return probe == 0.0;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

std::vector<double> conv_forward(const Observation& image, const PolicyParams& params) {
  check_shape(image, params.config);
  std::vector<double> out;
  convolve(image, params, out);
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> probs(logits.size());
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    probs[a] = std::exp(logits[a] - top);
    total += probs[a];
  }
  for (double& p : probs) p /= total;
  return probs;
}

void check_finite(const PolicyParams& params) {
  require_finite(params.weights.conv_kernels, "conv kernel");
  require_finite(params.weights.conv_bias, "conv bias");
  require_finite(params.weights.fc_bias, "fc bias");
  if (!all_finite_fast(params.weights.fc_weights)) throw NumericError("non-finite fc weight");
}

PreparedPolicy prepare(const PolicyParams& params) {
  check_finite(params);
  const NetConfig& c = params.config;
  const int A = c.num_actions;
  const std::size_t plane = static_cast<std::size_t>(c.conv_rows()) * c.conv_cols();
  PreparedPolicy p{&params, std::vector<double>(static_cast<std::size_t>(c.num_filters) * A, 0.0)};
  const double* w = params.weights.fc_weights.data();
  for (int f = 0; f < c.num_filters; ++f) {
    double* sums = p.plane_sums.data() + static_cast<std::size_t>(f) * A;
    for (std::size_t pos = 0; pos < plane; ++pos) {
      const double* row = w + (f * plane + pos) * A;
      for (int a = 0; a < A; ++a) sums[a] += row[a];
    }
  }
  return p;
}

void forward(const Observation& observation, const PreparedPolicy& policy, ForwardTrace& trace) {
  const PolicyParams& params = *policy.params;
  const NetConfig& c = params.config;
  check_shape(observation, c);

  const int A = c.num_actions;
  const std::size_t plane = static_cast<std::size_t>(c.conv_rows()) * c.conv_cols();
  const double* w = params.weights.fc_weights.data();
  const auto& biases = params.weights.conv_bias;

  // Untouched units hold exactly their bias, so a buffer filled for the same
  // biases and geometry only needs the previous step's touched units reset.
  const bool reuse = trace.filled_bias == biases && trace.input.rows == observation.rows &&
                     trace.input.cols == observation.cols && trace.pre_activation.size() == c.hidden_size() &&
                     trace.hidden.size() == c.hidden_size();
  if (reuse) {
    for (int f = 0; f < c.num_filters; ++f)
      for (std::uint32_t pos : trace.touched) {
        trace.pre_activation[f * plane + pos] = biases[f];
        trace.hidden[f * plane + pos] = std::max(biases[f], 0.0);
      }
  } else {
    trace.pre_activation.resize(c.hidden_size());
    trace.hidden.resize(c.hidden_size());
    for (int f = 0; f < c.num_filters; ++f) {
      const auto base = static_cast<std::ptrdiff_t>(f * plane);
      std::fill_n(trace.pre_activation.begin() + base, plane, biases[f]);
      std::fill_n(trace.hidden.begin() + base, plane, std::max(biases[f], 0.0));
    }
    trace.filled_bias = biases;
  }
  trace.input = observation;
  scatter(observation, params, trace.pre_activation, trace.touched);
  trace.active.clear();
  trace.background.assign(static_cast<std::size_t>(c.num_filters) * A, 0.0);
  trace.logits.assign(params.weights.fc_bias.begin(), params.weights.fc_bias.end());
  for (int f = 0; f < c.num_filters; ++f) {
    const std::size_t base = f * plane;
    const double bias = biases[f];
    for (std::uint32_t pos : trace.touched) {
      const double v = trace.pre_activation[base + pos];
      trace.hidden[base + pos] = std::max(v, 0.0);
      if (v > 0.0) trace.active.push_back(static_cast<std::uint32_t>(base + pos));
    }
    if (bias > 0.0) {
      double* bg = trace.background.data() + static_cast<std::size_t>(f) * A;
      std::copy_n(policy.plane_sums.begin() + static_cast<std::ptrdiff_t>(f) * A, A, bg);
      for (std::uint32_t pos : trace.touched) {
        const double* row = w + (base + pos) * A;
        for (int a = 0; a < A; ++a) bg[a] -= row[a];
      }
      for (int a = 0; a < A; ++a) trace.logits[a] += bias * bg[a];
    }
  }
  for (std::uint32_t h : trace.active) {
    const double x = trace.hidden[h];
    const double* row = w + static_cast<std::size_t>(h) * A;
    for (int a = 0; a < A; ++a) trace.logits[a] += row[a] * x;
  }
  require_finite(trace.logits, "logit");
  trace.probs = softmax(trace.logits);
}

void forward(const Observation& observation, const PolicyParams& params, ForwardTrace& trace) {
  forward(observation, prepare(params), trace);
}

ForwardTrace forward(const Observation& observation, const PolicyParams& params) {
  ForwardTrace trace;
  forward(observation, params, trace);
  return trace;
}

int sample_action(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    cumulative += probs[a];
    last_positive = static_cast<int>(a);
    if (u < cumulative) return last_positive;
  }
  return last_positive;  // rounding left u >= sum(probs)
}

int greedy_action(std::span<const double> probs) {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

GradientAccumulator::GradientAccumulator(const NetConfig& config)
    : config_(config),
      grad_(ParamTensors::zeros(config)),
      broadcast_(static_cast<std::size_t>(config.num_filters) * config.num_actions, 0.0) {}

void GradientAccumulator::add(const ForwardTrace& trace, const PolicyParams& params, int action, double weight) {
  const NetConfig& c = params.config;
  const int A = c.num_actions;
  const std::size_t H = c.hidden_size();
  if (action < 0 || action >= A) throw DomainError("action outside the network's output range");
  if (trace.hidden.size() != H || trace.probs.size() != static_cast<std::size_t>(A) ||
      trace.background.size() != broadcast_.size() || trace.input.rows != c.input_rows ||
      trace.input.cols != c.input_cols)
    throw ShapeError("trace does not match the network");
  if (grad_.fc_weights.size() != H * A) throw ShapeError("accumulator does not match the network");
  if (weight == 0.0) return;

  // d log p[action] / d logits = onehot(action) - probs
  std::vector<double> dlogits(A);
  for (int a = 0; a < A; ++a) dlogits[a] = weight * ((a == action ? 1.0 : 0.0) - trace.probs[a]);
  for (int a = 0; a < A; ++a) grad_.fc_bias[a] += dlogits[a];

  const double* w = params.weights.fc_weights.data();
  double* gw = grad_.fc_weights.data();
  const int K = c.kernel_size;
  const int out_cols = c.conv_cols();
  const std::size_t plane = static_cast<std::size_t>(c.conv_rows()) * out_cols;

  // Background units: hidden = bias, all-zero window, so no kernel gradient.
  // Their fc gradient is dlogits * bias at every untouched position; it is
  // added to the whole plane in take() and cancelled here for touched ones.
  for (int f = 0; f < c.num_filters; ++f) {
    const double bias = params.weights.conv_bias[f];
    if (bias <= 0.0) continue;
    const double* bg = trace.background.data() + static_cast<std::size_t>(f) * A;
    double* bc = broadcast_.data() + static_cast<std::size_t>(f) * A;
    double dbias = 0.0;
    for (int a = 0; a < A; ++a) {
      bc[a] += dlogits[a] * bias;
      dbias += dlogits[a] * bg[a];
    }
    grad_.conv_bias[f] += dbias;
    for (std::uint32_t pos : trace.touched) {
      double* row = gw + (f * plane + pos) * A;
      for (int a = 0; a < A; ++a) row[a] -= dlogits[a] * bias;
    }
  }

  // Only units with positive pre-activation pass gradient through the ReLU.
  const Observation& image = trace.input;
  for (std::uint32_t h : trace.active) {
    const double x = trace.hidden[h];
    const std::size_t base = static_cast<std::size_t>(h) * A;
    double dpre = 0.0;
    for (int a = 0; a < A; ++a) {
      gw[base + a] += dlogits[a] * x;
      dpre += dlogits[a] * w[base + a];
    }
    const int f = static_cast<int>(h / plane);
    const std::size_t pos = h % plane;
    const int orow = static_cast<int>(pos / out_cols);
    const int ocol = static_cast<int>(pos % out_cols);
    grad_.conv_bias[f] += dpre;
    double* gk = grad_.conv_kernels.data() + static_cast<std::size_t>(f) * K * K;
    for (int kr = 0; kr < K; ++kr) {
      for (int kc = 0; kc < K; ++kc) {
        const double in = image.at(orow + kr, ocol + kc);
        if (in != 0.0) gk[kr * K + kc] += dpre * in;
      }
    }
  }
}

Gradient GradientAccumulator::take() {
  const int A = static_cast<int>(grad_.fc_bias.size());
  const std::size_t filters = grad_.conv_bias.size();
  const std::size_t plane = grad_.fc_weights.size() / (filters * A);
  for (std::size_t f = 0; f < filters; ++f) {
    const double* bc = broadcast_.data() + f * A;
    if (std::all_of(bc, bc + A, [](double v) { return v == 0.0; })) continue;
    for (std::size_t pos = 0; pos < plane; ++pos) {
      double* row = grad_.fc_weights.data() + (f * plane + pos) * A;
      for (int a = 0; a < A; ++a) row[a] += bc[a];
    }
  }
  std::fill(broadcast_.begin(), broadcast_.end(), 0.0);
  Gradient out = std::move(grad_);
  grad_ = ParamTensors::zeros(config_);
  return out;
}

Gradient policy_gradient(const PolicyParams& params, std::span<const ForwardTrace> traces,
                         std::span<const int> actions, std::span<const double> advantages) {
  if (traces.size() != actions.size() || traces.size() != advantages.size())
    throw DomainError("policy_gradient: traces, actions and advantages differ in length");
  GradientAccumulator acc(params.config);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    if (!std::isfinite(advantages[t])) throw NumericError("non-finite advantage");
    acc.add(traces[t], params, actions[t], advantages[t]);
  }
  return acc.take();
}

void apply_update(PolicyParams& params, const Gradient& gradient) {
  if (gradient.size() != params.weights.size()) throw ShapeError("gradient shape mismatch");
  if (!gradient.all_finite()) throw NumericError("non-finite gradient");
  const NetConfig& c = params.config;
  auto w = params.weights.tensors();
  auto acc = params.sq_avg.tensors();
  const auto g = gradient.tensors();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (g[k].size() != w[k].size()) throw ShapeError("gradient shape mismatch");
    for (std::size_t i = 0; i < w[k].size(); ++i) {
      acc[k][i] = c.rmsprop_decay * acc[k][i] + (1.0 - c.rmsprop_decay) * g[k][i] * g[k][i];
      w[k][i] += c.learning_rate * g[k][i] / std::sqrt(acc[k][i] + c.rmsprop_epsilon);
    }
  }
  if (!params.weights.all_finite()) throw NumericError("update produced non-finite parameters");
}

// Checkpoint layout (all integers and floats little-endian):
//   char[8]  magic "DRLSCKPT"
//   u32      format version (1)
//   u32 x 5  input_rows, input_cols, kernel_size, num_filters, num_actions
//   f64 x 3  learning_rate, rmsprop_decay, rmsprop_epsilon
//   u64      iteration
//   u64      N, number of parameters
//   f64 x N  weights: conv_kernels, conv_bias, fc_weights, fc_bias
//   f64 x N  rmsprop accumulators, same order
//   u64      FNV-1a 64 of every preceding byte
namespace {

constexpr char kMagic[8] = {'D', 'R', 'L', 'S', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>) {
      bits = std::bit_cast<std::uint64_t>(value);
    } else {
      bits = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  std::string bytes;
};

class Reader {
 public:
  explicit Reader(const std::string& b) : bytes(b) {}
  template <typename T>
  T get() {
    if (pos + sizeof(T) > bytes.size()) throw FormatError("checkpoint truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    pos += sizeof(T);
    if constexpr (std::is_same_v<T, double>) {
      return std::bit_cast<double>(bits);
    } else {
      return static_cast<T>(bits);
    }
  }
  const std::string& bytes;
  std::size_t pos = 0;
};

}  // namespace

void save_params(const PolicyParams& params, const std::filesystem::path& path) {
  const NetConfig& c = params.config;
  Writer w;
  w.bytes.append(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kVersion);
  for (int v : {c.input_rows, c.input_cols, c.kernel_size, c.num_filters, c.num_actions})
    w.put<std::uint32_t>(static_cast<std::uint32_t>(v));
  w.put<double>(c.learning_rate);
  w.put<double>(c.rmsprop_decay);
  w.put<double>(c.rmsprop_epsilon);
  w.put<std::uint64_t>(params.iteration);
  w.put<std::uint64_t>(params.weights.size());
  for (const ParamTensors* set : {&params.weights, &params.sq_avg})
    for (auto t : set->tensors())
      for (double v : t) w.put<double>(v);
  w.put<std::uint64_t>(fnv1a(w.bytes));

  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

PolicyParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw FormatError(path.string() + ": not a policy checkpoint");
  Reader r(bytes);
  r.pos = sizeof(kMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));

  NetConfig c;
  c.input_rows = static_cast<int>(r.get<std::uint32_t>());
  c.input_cols = static_cast<int>(r.get<std::uint32_t>());
  c.kernel_size = static_cast<int>(r.get<std::uint32_t>());
  c.num_filters = static_cast<int>(r.get<std::uint32_t>());
  c.num_actions = static_cast<int>(r.get<std::uint32_t>());
  c.learning_rate = r.get<double>();
  c.rmsprop_decay = r.get<double>();
  c.rmsprop_epsilon = r.get<double>();
  const auto iteration = r.get<std::uint64_t>();
  const auto count = r.get<std::uint64_t>();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }

  PolicyParams p = zero_params(c);
  p.iteration = iteration;
  if (count != p.weights.size()) throw FormatError("checkpoint parameter count does not match its header");
  const std::size_t body_end = r.pos + 2 * count * sizeof(double);
  if (body_end + sizeof(std::uint64_t) != bytes.size())
    throw FormatError(bytes.size() < body_end + sizeof(std::uint64_t) ? "checkpoint truncated"
                                                                       : "trailing bytes in checkpoint");
  for (ParamTensors* set : {&p.weights, &p.sq_avg})
    for (auto t : set->tensors())
      for (double& v : t) v = r.get<double>();
  const auto stored = r.get<std::uint64_t>();
  if (stored != fnv1a(bytes.substr(0, body_end))) throw FormatError("checkpoint checksum mismatch");
  if (!p.weights.all_finite() || !p.sq_avg.all_finite()) throw FormatError("checkpoint holds non-finite values");
  return p;
}

PolicyParams load_params(const std::filesystem::path& path, const NetConfig& expected) {
  PolicyParams p = load_params(path);
  const NetConfig& c = p.config;
  if (c.input_rows != expected.input_rows || c.input_cols != expected.input_cols ||
      c.kernel_size != expected.kernel_size || c.num_filters != expected.num_filters ||
      c.num_actions != expected.num_actions) {
    throw ShapeError("checkpoint network " + std::to_string(c.input_rows) + "x" + std::to_string(c.input_cols) +
                     " K=" + std::to_string(c.kernel_size) + " F=" + std::to_string(c.num_filters) +
                     " actions=" + std::to_string(c.num_actions) + " does not match configured " +
                     std::to_string(expected.input_rows) + "x" + std::to_string(expected.input_cols) +
                     " K=" + std::to_string(expected.kernel_size) + " F=" + std::to_string(expected.num_filters) +
                     " actions=" + std::to_string(expected.num_actions));
  }
  return p;
}

}  // namespace drlsched
