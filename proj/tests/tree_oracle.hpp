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

// Brute-force reference for the regression tree. Every candidate split is
// materialized and scored by recomputing both children's squared error
// from scratch, with no running sums and no gain formula.

#ifndef AUGBOOST_TESTS_TREE_ORACLE_HPP
#define AUGBOOST_TESTS_TREE_ORACLE_HPP

#include <random>
#include <set>
#include <vector>

#include "augboost/tree.hpp"

namespace augboost::oracle {

inline double squared_error(const std::vector<double>& pred, const std::vector<double>& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += (pred[i] - t[i]) * (pred[i] - t[i]);
  return s;
}

inline double mean_of(const std::vector<std::size_t>& rows, const std::vector<double>& t) {
  double s = 0.0;
  for (auto r : rows) s += t[r];
  return s / static_cast<double>(rows.size());
}

inline double sse_of(const std::vector<std::size_t>& rows, const std::vector<double>& t) {
  double m = mean_of(rows, t);
  double s = 0.0;
  for (auto r : rows) s += (t[r] - m) * (t[r] - m);
  return s;
}

// Greedy top-down search. Candidates are visited by feature, then by
// increasing threshold; only a strictly lower child error replaces the
// incumbent, so ties resolve to the lowest feature and threshold.
inline void grow(const Matrix& x, const std::vector<double>& t, const TreeConfig& cfg,
                 const std::vector<std::size_t>& rows, int depth, std::vector<double>& pred) {
  const double value = mean_of(rows, t);
  for (auto r : rows) pred[r] = value;
  bool constant = true;
  for (auto r : rows) constant = constant && t[r] == t[rows.front()];
  if (depth >= cfg.max_depth || static_cast<int>(rows.size()) < cfg.min_samples_split ||
      constant) {
    return;
  }
  double best = sse_of(rows, t);
  bool found = false;
  std::vector<std::size_t> best_left;
  std::vector<std::size_t> best_right;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::set<double> values;
    for (auto r : rows) values.insert(x(r, f));
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double cut = *it;  // left holds every value <= cut
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (auto r : rows) (x(r, f) <= cut ? left : right).push_back(r);
      if (static_cast<int>(left.size()) < cfg.min_samples_leaf ||
          static_cast<int>(right.size()) < cfg.min_samples_leaf) {
        continue;
      }
      double child = sse_of(left, t) + sse_of(right, t);
      if (child < best) {
        best = child;
        found = true;
        best_left = std::move(left);
        best_right = std::move(right);
      }
    }
  }
  if (!found) return;
  grow(x, t, cfg, best_left, depth + 1, pred);
  grow(x, t, cfg, best_right, depth + 1, pred);
}

/// Training squared error of the greedy reference tree.
inline double greedy_loss(const Matrix& x, const std::vector<double>& t, const TreeConfig& cfg) {
  std::vector<std::size_t> rows(x.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<double> pred(t.size());
  grow(x, t, cfg, rows, 0, pred);
  return squared_error(pred, t);
}

struct Instance {
  Matrix x;
  std::vector<double> t;
  TreeConfig cfg;
};

/// n <= 64 rows, p <= 4 features, depth <= 2. Half of the instances use
/// small integer features so that repeated values are common.
inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(2, 64);
  std::uniform_int_distribution<int> p_dist(1, 4);
  std::uniform_int_distribution<int> d_dist(1, 2);
  std::uniform_int_distribution<int> leaf_dist(1, 3);
  std::uniform_int_distribution<int> extra_dist(0, 2);
  std::uniform_int_distribution<int> coarse(0, 6);
  std::normal_distribution<double> gauss;
  const auto n = static_cast<std::size_t>(n_dist(rng));
  const auto p = static_cast<std::size_t>(p_dist(rng));
  const bool integer_features = rng() % 2 == 0;
  Instance in;
  in.x = Matrix(n, p);
  for (double& v : in.x.data()) v = integer_features ? coarse(rng) : gauss(rng);
  in.t.resize(n);
  for (double& v : in.t) v = gauss(rng);
  const int leaf = leaf_dist(rng);
  in.cfg = TreeConfig{d_dist(rng), leaf, 2 * leaf + extra_dist(rng)};
  return in;
}

}  // namespace augboost::oracle

#endif  // AUGBOOST_TESTS_TREE_ORACLE_HPP
