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

#ifndef AUGBOOST_TREE_HPP
#define AUGBOOST_TREE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "augboost/matrix.hpp"

namespace augboost {

struct TreeConfig {
  int max_depth = 3;
  int min_samples_leaf = 20;
  int min_samples_split = 40;

  void validate() const {
    if (max_depth < 1 || min_samples_leaf < 1 || min_samples_split < 1) {
      throw ValidationError("tree: depth and sample limits must be positive");
    }
    if (min_samples_split < 2 * min_samples_leaf) {
      throw ValidationError("tree: min_samples_split must be >= 2 * min_samples_leaf");
    }
  }
};

/// Per-feature row orderings of a design matrix. Rows with equal values
/// keep ascending row order. Computing this once lets all K class trees of
/// a boosting stage share the sort.
class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& x) : order_(x.cols()) {
    for (std::size_t f = 0; f < x.cols(); ++f) {
      auto& idx = order_[f];
      idx.resize(x.rows());
      std::iota(idx.begin(), idx.end(), std::uint32_t{0});
      std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return x(a, f) < x(b, f);
      });
    }
  }
  std::span<const std::uint32_t> operator[](std::size_t f) const { return order_[f]; }
  std::size_t features() const { return order_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> order_;
};

/// CART regression tree over real features. Rows go left iff
/// `x[feature] <= threshold`.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf prediction (mean of training targets)
    int n_samples = 0;

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  RegressionTree() = default;
  RegressionTree(std::vector<Node> nodes, std::size_t n_features)
      : nodes_(std::move(nodes)), n_features_(n_features) {}

  /// Greedy exact-split fit minimizing squared error.
  static RegressionTree fit(const Matrix& x, std::span<const double> targets,
                            const TreeConfig& cfg) {
    check_inputs(x, targets);
    SortedColumns sorted(x);
    return fit(x, targets, cfg, sorted);
  }

  static RegressionTree fit(const Matrix& x, std::span<const double> targets,
                            const TreeConfig& cfg, const SortedColumns& sorted) {
    cfg.validate();
    check_inputs(x, targets);
    Builder b{x, targets, cfg, sorted, {}};
    std::vector<std::uint32_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), std::uint32_t{0});
    b.grow(std::move(rows), 0);
    return RegressionTree(std::move(b.nodes), x.cols());
  }

  double predict_row(std::span<const double> row) const {
    int k = 0;
    while (!nodes_[k].is_leaf()) {
      const Node& n = nodes_[k];
      k = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[k].value;
  }

  std::vector<double> predict(const Matrix& x) const {
    if (x.cols() != n_features_) {
      throw ValidationError("tree: expected " + std::to_string(n_features_) +
                            " features, got " + std::to_string(x.cols()));
    }
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_row(x.row(r));
    return out;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }

  int depth() const { return depth_from(0); }

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  static void check_inputs(const Matrix& x, std::span<const double> targets) {
    if (x.rows() == 0) throw ValidationError("tree: empty input");
    if (targets.size() != x.rows()) {
      throw ValidationError("tree: target length does not match row count");
    }
    if (!all_finite(x) ||
        !std::all_of(targets.begin(), targets.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw ValidationError("tree: non-finite values in input");
    }
  }

  int depth_from(int k) const {
    if (nodes_[k].is_leaf()) return 0;
    return 1 + std::max(depth_from(nodes_[k].left), depth_from(nodes_[k].right));
  }

  struct Builder {
    const Matrix& x;
    std::span<const double> t;
    const TreeConfig& cfg;
    const SortedColumns& sorted;
    std::vector<Node> nodes;
    std::vector<std::uint8_t> member = std::vector<std::uint8_t>(x.rows(), 0);

    // `rows` is kept ascending so leaf means sum in row order.
    int grow(std::vector<std::uint32_t> rows, int depth) {
      int id = static_cast<int>(nodes.size());
      nodes.emplace_back();
      const int n = static_cast<int>(rows.size());
      nodes[id].n_samples = n;

      double sum = 0.0;
      double lo = t[rows.front()];
      double hi = lo;
      for (auto r : rows) {
        sum += t[r];
        lo = std::min(lo, t[r]);
        hi = std::max(hi, t[r]);
      }
      nodes[id].value = sum / n;

      if (depth >= cfg.max_depth || n < cfg.min_samples_split || lo == hi) {
        return id;
      }

      int best_feature = -1;
      double best_threshold = 0.0;
      double best_gain = 0.0;
      std::vector<std::uint32_t> ordered;
      ordered.reserve(rows.size());
      for (auto r : rows) member[r] = 1;
      for (std::size_t f = 0; f < x.cols(); ++f) {
        ordered.clear();
        for (auto r : sorted[f]) {
          if (member[r]) ordered.push_back(r);
        }
        double left_sum = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
          left_sum += t[ordered[i]];
          const double a = x(ordered[i], f);
          const double b = x(ordered[i + 1], f);
          if (a == b) continue;
          const int n_left = i + 1;
          const int n_right = n - n_left;
          if (n_left < cfg.min_samples_leaf || n_right < cfg.min_samples_leaf) continue;
          const double diff = left_sum / n_left - (sum - left_sum) / n_right;
          const double gain =
              static_cast<double>(n_left) * n_right / n * diff * diff;
          // Strict comparison keeps the lowest feature, then lowest threshold.
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = static_cast<int>(f);
            best_threshold = midpoint(a, b);
          }
        }
      }
      for (auto r : rows) member[r] = 0;
      if (best_feature < 0) return id;

      std::vector<std::uint32_t> left;
      std::vector<std::uint32_t> right;
      for (auto r : rows) {
        (x(r, best_feature) <= best_threshold ? left : right).push_back(r);
      }
      nodes[id].feature = best_feature;
      nodes[id].threshold = best_threshold;
      int l = grow(std::move(left), depth + 1);
      int rr = grow(std::move(right), depth + 1);
      nodes[id].left = l;
      nodes[id].right = rr;
      return id;
    }
  };

 public:
  /// Split point between consecutive distinct values a < b that keeps a on
  /// the left and b on the right.
  static double midpoint(double a, double b) {
    double mid = a + (b - a) / 2.0;
    return mid < b ? mid : a;
  }

 private:
  std::vector<Node> nodes_;
  std::size_t n_features_ = 0;
};

}  // namespace augboost

#endif  // AUGBOOST_TREE_HPP
