#pragma once
// Fully connected regressor with ReLU hidden layers and a linear scalar
// output, trained on mean squared error with RMSProp.
//
// Parameters live in one flat vector. Layer l occupies
//   weights: out_l * in_l values, row-major (row = output unit)
//   bias:    out_l values
// in layer order, which is also the flatten/unflatten ordering.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sail/common.hpp"

namespace sail {

class Mlp {
 public:
  Mlp() = default;

  /// Zero-valued network with layer widths `dims` (input first, output last).
  explicit Mlp(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw ContractViolation("mlp needs at least input and output dims");
    if (dims_.back() != 1) throw ContractViolation("mlp output must be scalar");
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      offsets_.push_back(offset);
      offset += dims_[l] * dims_[l + 1] + dims_[l + 1];
    }
    values_.assign(offset, 0.0);
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t layer_count() const noexcept { return offsets_.size(); }
  std::size_t input_dim() const noexcept { return dims_.front(); }
  std::size_t in(std::size_t l) const noexcept { return dims_[l]; }
  std::size_t out(std::size_t l) const noexcept { return dims_[l + 1]; }
  std::size_t parameter_count() const noexcept { return values_.size(); }

  std::span<double> weights(std::size_t l) noexcept {
    return {values_.data() + offsets_[l], in(l) * out(l)};
  }
  std::span<const double> weights(std::size_t l) const noexcept {
    return {values_.data() + offsets_[l], in(l) * out(l)};
  }
  std::span<double> bias(std::size_t l) noexcept {
    return {values_.data() + offsets_[l] + in(l) * out(l), out(l)};
  }
  std::span<const double> bias(std::size_t l) const noexcept {
    return {values_.data() + offsets_[l] + in(l) * out(l), out(l)};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const Mlp& o) const noexcept { return dims_ == o.dims_; }

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.dims_ == b.dims_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

using MlpParams = Mlp;

/// Layer widths used for the cost-to-go regressor.
inline std::vector<std::size_t> default_layer_dims(std::size_t input_dim) {
  return {input_dim, 100, 50, 1};
}
/// Single hidden layer variant used with the cross-entropy method.
inline std::vector<std::size_t> cem_layer_dims(std::size_t input_dim) {
  return {input_dim, 100, 1};
}

inline std::vector<double> flatten(const MlpParams& p) {
  return {p.values().begin(), p.values().end()};
}

inline MlpParams unflatten(std::span<const double> flat, std::vector<std::size_t> dims) {
  MlpParams p(std::move(dims));
  if (flat.size() != p.parameter_count())
    throw ContractViolation("unflatten: expected " + std::to_string(p.parameter_count()) +
                            " values, got " + std::to_string(flat.size()));
  std::copy(flat.begin(), flat.end(), p.values().begin());
  return p;
}

/// Uniform Glorot initialization, bound sqrt(6 / (fan_in + fan_out)); zero biases.
inline MlpParams init_params(std::vector<std::size_t> dims, std::uint64_t seed) {
  MlpParams p(std::move(dims));
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(p.in(l) + p.out(l)));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& w : p.weights(l)) w = u(rng);
  }
  return p;
}

/// Reusable activation buffers so the hot scoring path does not allocate.
class ForwardWorkspace {
 public:
  std::vector<double> a, b;
};

inline double forward(const MlpParams& p, std::span<const double> input, ForwardWorkspace& ws) {
  if (input.size() != p.input_dim()) throw ContractViolation("forward: input dimension mismatch");
  for (double x : input)
    if (!std::isfinite(x)) throw std::domain_error("forward: non-finite input");
  ws.a.assign(input.begin(), input.end());
  const std::size_t last = p.layer_count() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const auto w = p.weights(l);
    const auto bias = p.bias(l);
    const std::size_t n_in = p.in(l), n_out = p.out(l);
    ws.b.resize(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double* row = w.data() + o * n_in;
      double z = bias[o];
      for (std::size_t i = 0; i < n_in; ++i) z += row[i] * ws.a[i];
      ws.b[o] = (l == last || z > 0.0) ? z : 0.0;
    }
    std::swap(ws.a, ws.b);
  }
  return ws.a[0];
}

inline double forward(const MlpParams& p, std::span<const double> input) {
  ForwardWorkspace ws;
  return forward(p, input, ws);
}

struct Sample {
  std::span<const double> features;
  double label;
};

struct LossAndGradient {
  double loss = 0.0;
  MlpParams gradient;
};

/// Mean squared error over the batch and its gradient by backpropagation.
inline LossAndGradient backward(const MlpParams& p, std::span<const Sample> batch) {
  if (batch.empty()) throw ContractViolation("backward: empty batch");
  LossAndGradient out{0.0, MlpParams(p.dims())};
  const std::size_t L = p.layer_count();
  // activations[l] is the input to layer l; activations[L] is the output.
  std::vector<std::vector<double>> act(L + 1);
  std::vector<double> delta, prev_delta;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  for (const Sample& s : batch) {
    if (s.features.size() != p.input_dim())
      throw ContractViolation("backward: input dimension mismatch");
    act[0].assign(s.features.begin(), s.features.end());
    for (std::size_t l = 0; l < L; ++l) {
      const auto w = p.weights(l);
      const auto bias = p.bias(l);
      act[l + 1].resize(p.out(l));
      for (std::size_t o = 0; o < p.out(l); ++o) {
        double z = bias[o];
        const double* row = w.data() + o * p.in(l);
        for (std::size_t i = 0; i < p.in(l); ++i) z += row[i] * act[l][i];
        act[l + 1][o] = (l + 1 == L || z > 0.0) ? z : 0.0;
      }
    }
    const double err = act[L][0] - s.label;
    out.loss += err * err * inv_n;

    delta.assign(1, 2.0 * err * inv_n);
    for (std::size_t l = L; l-- > 0;) {
      auto gw = out.gradient.weights(l);
      auto gb = out.gradient.bias(l);
      const auto w = p.weights(l);
      const std::size_t n_in = p.in(l), n_out = p.out(l);
      for (std::size_t o = 0; o < n_out; ++o) {
        gb[o] += delta[o];
        double* grow = gw.data() + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) grow[i] += delta[o] * act[l][i];
      }
      if (l == 0) break;
      prev_delta.assign(n_in, 0.0);
      for (std::size_t o = 0; o < n_out; ++o) {
        const double* row = w.data() + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) prev_delta[i] += row[i] * delta[o];
      }
      // ReLU derivative; a unit that output exactly zero is treated as inactive.
      for (std::size_t i = 0; i < n_in; ++i)
        if (act[l][i] <= 0.0) prev_delta[i] = 0.0;
      std::swap(delta, prev_delta);
    }
  }
  return out;
}

/// RMSProp state: running mean of squared gradients per parameter.
struct RmsProp {
  double learning_rate = 0.01;
  double decay = 0.9;
  double epsilon = 1e-8;
  std::vector<double> mean_square;

  void step(MlpParams& p, const MlpParams& grad) {
    if (!p.same_shape(grad)) throw ContractViolation("rmsprop: gradient shape mismatch");
    if (mean_square.size() != p.parameter_count()) mean_square.assign(p.parameter_count(), 0.0);
    auto v = p.values();
    const auto g = grad.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      mean_square[i] = decay * mean_square[i] + (1.0 - decay) * g[i] * g[i];
      v[i] -= learning_rate * g[i] / (std::sqrt(mean_square[i]) + epsilon);
    }
  }
};

struct FitOptions {
  std::size_t epochs = 3;
  std::size_t batch_size = 64;
};

/// Minibatch regression, sampling without replacement each epoch. Returns
/// the mean batch loss of every epoch.
inline std::vector<double> fit(MlpParams& p, RmsProp& opt, std::span<const Sample> data,
                               const FitOptions& options, std::mt19937_64& rng) {
  std::vector<double> epoch_loss;
  if (data.empty()) return epoch_loss;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Sample> batch;
  for (std::size_t e = 0; e < options.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      batch.clear();
      const std::size_t stop = std::min(order.size(), start + options.batch_size);
      for (std::size_t i = start; i < stop; ++i) batch.push_back(data[order[i]]);
      auto lg = backward(p, batch);
      opt.step(p, lg.gradient);
      total += lg.loss;
      ++batches;
    }
    epoch_loss.push_back(total / static_cast<double>(batches));
  }
  return epoch_loss;
}

inline double mean_squared_error(const MlpParams& p, std::span<const Sample> data) {
  if (data.empty()) return 0.0;
  ForwardWorkspace ws;
  double total = 0.0;
  for (const auto& s : data) {
    const double e = forward(p, s.features, ws) - s.label;
    total += e * e;
  }
  return total / static_cast<double>(data.size());
}

// Binary parameter file:
//   8 bytes  magic "SAILMLP1"
//   4 bytes  endianness tag 0x01020304 in writer byte order
//   4 bytes  number of layer widths n
//   n x 8    layer widths (uint64)
//   rest     flattened parameters (float64)

inline constexpr char kParamsMagic[8] = {'S', 'A', 'I', 'L', 'M', 'L', 'P', '1'};
inline constexpr std::uint32_t kEndianTag = 0x01020304;

inline void save_params(const MlpParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kParamsMagic, sizeof kParamsMagic);
  out.write(reinterpret_cast<const char*>(&kEndianTag), sizeof kEndianTag);
  const auto n = static_cast<std::uint32_t>(p.dims().size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (std::size_t d : p.dims()) {
    const auto v = static_cast<std::uint64_t>(d);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  out.write(reinterpret_cast<const char*>(p.values().data()),
            static_cast<std::streamsize>(p.parameter_count() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline MlpParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[8];
  std::uint32_t tag = 0, n = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&tag), sizeof tag);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || std::memcmp(magic, kParamsMagic, sizeof magic) != 0)
    throw std::runtime_error("not a parameter file: " + path);
  if (tag != kEndianTag) throw std::runtime_error("parameter file has foreign byte order: " + path);
  if (n < 2 || n > 64) throw std::runtime_error("corrupt parameter header: " + path);
  std::vector<std::size_t> dims(n);
  for (auto& d : dims) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    d = static_cast<std::size_t>(v);
  }
  MlpParams p(dims);
  in.read(reinterpret_cast<char*>(p.values().data()),
          static_cast<std::streamsize>(p.parameter_count() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated parameter file: " + path);
  return p;
}

}  // namespace sail
