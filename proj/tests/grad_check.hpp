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

// Central-difference check of the network's backpropagated gradients.

#ifndef AUGBOOST_TESTS_GRAD_CHECK_HPP
#define AUGBOOST_TESTS_GRAD_CHECK_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include "augboost/ann.hpp"

namespace augboost::oracle {

struct GradCheck {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

/// Compares every analytic partial derivative with (L(p+h) - L(p-h)) / 2h.
/// The relative error denominator is floored at 1e-6 so that vanishing
/// partials are judged on absolute error.
inline GradCheck check_gradients(Mlp net, const Matrix& x, const Matrix& targets,
                                 double h = 1e-5) {
  Mlp::Gradients g = net.gradients(x, targets);
  GradCheck out;
  auto probe = [&](double& p, double analytic) {
    const double saved = p;
    p = saved + h;
    const double up = net.loss(x, targets);
    p = saved - h;
    const double down = net.loss(x, targets);
    p = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic - numeric) / denom);
    ++out.parameters;
  };
  for (std::size_t l = 0; l < Mlp::kLayers; ++l) {
    auto& layer = net.layers()[l];
    for (std::size_t i = 0; i < layer.weights.data().size(); ++i) {
      probe(layer.weights.data()[i], g.weights[l].data()[i]);
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) probe(layer.bias[i], g.bias[l][i]);
  }
  return out;
}

/// Random 4-input, 2-output network with nonzero biases, plus a batch of
/// inputs and targets matching `mode`.
struct GradProblem {
  Mlp net;
  Matrix x;
  Matrix targets;
};

inline GradProblem gradient_problem(OutputMode mode, std::uint64_t seed) {
  MlpConfig cfg;
  cfg.input_width = 4;
  cfg.output_width = 2;
  cfg.output_mode = mode;
  cfg.seed = seed;
  GradProblem p{Mlp::init(cfg), Matrix(6, 4), Matrix(6, 2)};
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::normal_distribution<double> gauss;
  for (auto& layer : p.net.layers()) {
    for (double& b : layer.bias) b = 0.1 * gauss(rng);
  }
  for (double& v : p.x.data()) v = gauss(rng);
  for (std::size_t r = 0; r < p.targets.rows(); ++r) {
    if (mode == OutputMode::kSoftmaxCrossEntropy) {
      p.targets(r, r % 2) = 1.0;
    } else {
      p.targets(r, 0) = gauss(rng);
      p.targets(r, 1) = gauss(rng);
    }
  }
  return p;
}

}  // namespace augboost::oracle

#endif  // AUGBOOST_TESTS_GRAD_CHECK_HPP
