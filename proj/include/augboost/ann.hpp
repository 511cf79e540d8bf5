// Copyright 2026 The AugBoost Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fully connected network with three ReLU hidden layers, each as wide as
// the input, trained with mini-batch Adam. The third hidden layer doubles
// as a learned feature extractor.

#ifndef AUGBOOST_ANN_HPP
#define AUGBOOST_ANN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "augboost/matrix.hpp"
#include "augboost/random.hpp"

namespace augboost {

enum class OutputMode { kSoftmaxCrossEntropy, kLinearMse };

struct AdamConfig {
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct MlpConfig {
  std::size_t input_width = 1;
  std::size_t output_width = 1;
  OutputMode output_mode = OutputMode::kSoftmaxCrossEntropy;
  AdamConfig adam;
  int max_epochs = 30;
  int patience = 3;
  double min_improvement = 1e-6;
  std::uint64_t seed = 0;

  /// min(300, floor(n / 15)), never below one.
  static std::size_t batch_size(std::size_t n) {
    return std::min<std::size_t>(300, std::max<std::size_t>(1, n / 15));
  }
};

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// Row-wise softmax with max subtraction.
inline Matrix softmax_rows(const Matrix& z) {
  Matrix p(z.rows(), z.cols());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto in = z.row(r);
    auto out = p.row(r);
    double mx = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      out[k] = std::exp(in[k] - mx);
      s += out[k];
    }
    for (double& v : out) v /= s;
  }
  return p;
}

struct DenseLayer {
  Matrix weights;  // fan_in x fan_out
  std::vector<double> bias;
  bool frozen = false;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

class Mlp {
 public:
  static constexpr std::size_t kHiddenLayers = 3;
  static constexpr std::size_t kLayers = kHiddenLayers + 1;

  struct Forward {
    std::array<Matrix, kHiddenLayers> hidden;  // post-ReLU activations
    Matrix logits;                             // pre-softmax output layer
    Matrix output;                             // softmax(logits) or logits
  };

  struct Gradients {
    double loss = 0.0;
    std::array<Matrix, kLayers> weights;
    std::array<std::vector<double>, kLayers> bias;
  };

  Mlp() = default;

  /// He-normal weights (std = sqrt(2 / fan_in)), zero biases.
  static Mlp init(const MlpConfig& cfg) {
    if (cfg.input_width == 0 || cfg.output_width == 0) {
      throw ValidationError("mlp: widths must be positive");
    }
    Mlp net;
    net.mode_ = cfg.output_mode;
    Rng rng(cfg.seed);
    for (std::size_t l = 0; l < kLayers; ++l) {
      const std::size_t fan_in = cfg.input_width;
      const std::size_t fan_out = l + 1 < kLayers ? cfg.input_width : cfg.output_width;
      std::normal_distribution<double> gauss(0.0, std::sqrt(2.0 / fan_in));
      DenseLayer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
      for (double& w : layer.weights.data()) w = gauss(rng);
      net.layers_[l] = std::move(layer);
    }
    return net;
  }

  std::size_t input_width() const { return layers_[0].weights.rows(); }
  std::size_t output_width() const { return layers_[kLayers - 1].weights.cols(); }
  OutputMode output_mode() const { return mode_; }
  void set_output_mode(OutputMode mode) { mode_ = mode; }

  const std::array<DenseLayer, kLayers>& layers() const { return layers_; }
  std::array<DenseLayer, kLayers>& layers() { return layers_; }
  const std::vector<double>& history() const { return history_; }
  std::vector<double>& history() { return history_; }

  void freeze(std::size_t layer, bool frozen = true) { layers_.at(layer).frozen = frozen; }

  Forward forward(const Matrix& x) const {
    check_width(x);
    Forward f;
    const Matrix* in = &x;
    for (std::size_t l = 0; l < kHiddenLayers; ++l) {
      f.hidden[l] = affine(*in, layers_[l]);
      for (double& v : f.hidden[l].data()) v = relu(v);
      in = &f.hidden[l];
    }
    f.logits = affine(*in, layers_[kLayers - 1]);
    f.output = mode_ == OutputMode::kSoftmaxCrossEntropy ? softmax_rows(f.logits) : f.logits;
    return f;
  }

  /// Activations of the third hidden layer; the output layer is unused.
  Matrix extract_features(const Matrix& x) const {
    check_width(x);
    Matrix h = x;
    for (std::size_t l = 0; l < kHiddenLayers; ++l) {
      h = affine(h, layers_[l]);
      for (double& v : h.data()) v = relu(v);
    }
    return h;
  }

  /// Mean per-sample cross-entropy, or mean squared error over all entries.
  double loss(const Matrix& x, const Matrix& targets) const {
    return loss_from(forward(x), targets);
  }

  /// Loss and its gradient with respect to every parameter, by backprop.
  Gradients gradients(const Matrix& x, const Matrix& targets) const {
    Forward f = forward(x);
    Gradients g;
    g.loss = loss_from(f, targets);
    const std::size_t n = x.rows();
    const std::size_t k = output_width();

    Matrix delta(n, k);
    const double scale = mode_ == OutputMode::kSoftmaxCrossEntropy
                             ? 1.0 / static_cast<double>(n)
                             : 2.0 / static_cast<double>(n * k);
    for (std::size_t i = 0; i < delta.data().size(); ++i) {
      delta.data()[i] = scale * (f.output.data()[i] - targets.data()[i]);
    }
    for (std::size_t l = kLayers; l-- > 0;) {
      const Matrix& in = l == 0 ? x : f.hidden[l - 1];
      const DenseLayer& layer = layers_[l];
      Matrix gw(layer.weights.rows(), layer.weights.cols());
      std::vector<double> gb(layer.bias.size(), 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        auto d = delta.row(r);
        auto a = in.row(r);
        for (std::size_t i = 0; i < gw.rows(); ++i) {
          if (a[i] == 0.0) continue;
          auto gwr = gw.row(i);
          for (std::size_t j = 0; j < gw.cols(); ++j) gwr[j] += a[i] * d[j];
        }
        for (std::size_t j = 0; j < gb.size(); ++j) gb[j] += d[j];
      }
      g.weights[l] = std::move(gw);
      g.bias[l] = std::move(gb);
      if (l == 0) break;
      // Propagate through W^T and the ReLU of the previous layer.
      Matrix prev(n, layer.weights.rows());
      for (std::size_t r = 0; r < n; ++r) {
        auto d = delta.row(r);
        auto h = f.hidden[l - 1].row(r);
        auto p = prev.row(r);
        for (std::size_t i = 0; i < layer.weights.rows(); ++i) {
          if (h[i] <= 0.0) continue;
          auto w = layer.weights.row(i);
          double s = 0.0;
          for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * d[j];
          p[i] = s;
        }
      }
      delta = std::move(prev);
    }
    return g;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  void check_width(const Matrix& x) const {
    if (x.cols() != input_width()) {
      throw ValidationError("mlp: expected input width " + std::to_string(input_width()) +
                            ", got " + std::to_string(x.cols()));
    }
  }

  static Matrix affine(const Matrix& in, const DenseLayer& layer) {
    const Matrix& w = layer.weights;
    Matrix out(in.rows(), w.cols());
    for (std::size_t r = 0; r < in.rows(); ++r) {
      auto a = in.row(r);
      auto o = out.row(r);
      std::copy(layer.bias.begin(), layer.bias.end(), o.begin());
      for (std::size_t i = 0; i < w.rows(); ++i) {
        if (a[i] == 0.0) continue;
        auto wr = w.row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) o[j] += a[i] * wr[j];
      }
    }
    return out;
  }

  double loss_from(const Forward& f, const Matrix& targets) const {
    if (targets.rows() != f.output.rows() || targets.cols() != f.output.cols()) {
      throw ValidationError("mlp: target shape does not match output shape");
    }
    const std::size_t n = targets.rows();
    double total = 0.0;
    if (mode_ == OutputMode::kSoftmaxCrossEntropy) {
      // -sum_k t_k log softmax(z)_k, via log-sum-exp on the logits.
      for (std::size_t r = 0; r < n; ++r) {
        auto z = f.logits.row(r);
        double mx = *std::max_element(z.begin(), z.end());
        double s = 0.0;
        for (double v : z) s += std::exp(v - mx);
        double lse = mx + std::log(s);
        auto t = targets.row(r);
        for (std::size_t k = 0; k < z.size(); ++k) {
          if (t[k] != 0.0) total -= t[k] * (z[k] - lse);
        }
      }
      return total / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < targets.data().size(); ++i) {
      double d = f.output.data()[i] - targets.data()[i];
      total += d * d;
    }
    return total / static_cast<double>(targets.data().size());
  }

  std::array<DenseLayer, kLayers> layers_;
  OutputMode mode_ = OutputMode::kSoftmaxCrossEntropy;
  std::vector<double> history_;
};

/// Mini-batch Adam on the unfrozen layers. Stops after `max_epochs`, or
/// once the full-data loss has failed to improve by more than
/// `min_improvement` for `patience` consecutive epochs. Returns the
/// parameters with the lowest full-data loss seen, the starting point
/// included.
inline Mlp train(Mlp net, const Matrix& x, const Matrix& targets, const MlpConfig& cfg) {
  if (x.rows() == 0) throw ValidationError("mlp: empty training set");
  if (targets.rows() != x.rows()) {
    throw ValidationError("mlp: target rows do not match input rows");
  }
  net.set_output_mode(cfg.output_mode);
  const std::size_t n = x.rows();
  const std::size_t batch = MlpConfig::batch_size(n);
  const AdamConfig& adam = cfg.adam;

  auto& layers = net.layers();
  std::array<Matrix, Mlp::kLayers> mw;
  std::array<Matrix, Mlp::kLayers> vw;
  std::array<std::vector<double>, Mlp::kLayers> mb;
  std::array<std::vector<double>, Mlp::kLayers> vb;
  for (std::size_t l = 0; l < Mlp::kLayers; ++l) {
    mw[l] = vw[l] = Matrix(layers[l].weights.rows(), layers[l].weights.cols());
    mb[l] = vb[l] = std::vector<double>(layers[l].bias.size(), 0.0);
  }

  double best_loss = net.loss(x, targets);
  if (!std::isfinite(best_loss)) {
    throw TrainingError("mlp: non-finite loss before training");
  }
  Mlp best = net;
  int stall = 0;
  std::uint64_t step = 0;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> history;

  auto adam_update = [&](double& p, double& m, double& v, double g, double c1, double c2) {
    m = adam.beta1 * m + (1.0 - adam.beta1) * g;
    v = adam.beta2 * v + (1.0 - adam.beta2) * g * g;
    p -= adam.learning_rate * (m / c1) / (std::sqrt(v / c2) + adam.epsilon);
  };

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += batch) {
      std::span<const std::size_t> idx(order.data() + start, std::min(batch, n - start));
      Matrix xb = select_rows(x, idx);
      Matrix tb = select_rows(targets, idx);
      Mlp::Gradients g = net.gradients(xb, tb);
      ++step;
      const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < Mlp::kLayers; ++l) {
        if (layers[l].frozen) continue;
        auto& w = layers[l].weights.data();
        for (std::size_t i = 0; i < w.size(); ++i) {
          adam_update(w[i], mw[l].data()[i], vw[l].data()[i], g.weights[l].data()[i], c1, c2);
        }
        auto& b = layers[l].bias;
        for (std::size_t i = 0; i < b.size(); ++i) {
          adam_update(b[i], mb[l][i], vb[l][i], g.bias[l][i], c1, c2);
        }
      }
    }
    const double loss = net.loss(x, targets);
    if (!std::isfinite(loss)) {
      throw TrainingError("mlp: non-finite loss at epoch " + std::to_string(epoch + 1));
    }
    history.push_back(loss);
    const bool improved = best_loss - loss > cfg.min_improvement;
    if (loss < best_loss) {
      best_loss = loss;
      best = net;
    }
    stall = improved ? 0 : stall + 1;
    if (stall >= cfg.patience) break;
  }
  best.history() = std::move(history);
  return best;
}

/// Warm-started retraining with the first two hidden layers frozen.
inline Mlp retrain_transfer(Mlp net, const Matrix& x, const Matrix& targets,
                            const MlpConfig& cfg) {
  net.freeze(0);
  net.freeze(1);
  net.freeze(2, false);
  net.freeze(3, false);
  return train(std::move(net), x, targets, cfg);
}

inline Matrix extract_features(const Mlp& net, const Matrix& x) {
  return net.extract_features(x);
}

/// One-hot encoding of class indices into an n x k matrix.
inline Matrix one_hot(std::span<const int> classes, std::size_t k) {
  Matrix out(classes.size(), k);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out(i, static_cast<std::size_t>(classes[i])) = 1.0;
  }
  return out;
}

}  // namespace augboost

#endif  // AUGBOOST_ANN_HPP
