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

#ifndef AUGBOOST_AUGMENT_HPP
#define AUGBOOST_AUGMENT_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "augboost/ann.hpp"
#include "augboost/matrix.hpp"
#include "augboost/random.hpp"

namespace augboost {

enum class AugmenterKind { kAnn, kRandomProjection, kIdentity };

inline std::string_view to_string(AugmenterKind kind) {
  switch (kind) {
    case AugmenterKind::kAnn:
      return "ann";
    case AugmenterKind::kRandomProjection:
      return "rp";
    case AugmenterKind::kIdentity:
      return "identity";
  }
  return "?";
}

inline AugmenterKind parse_augmenter_kind(std::string_view s) {
  if (s == "ann") return AugmenterKind::kAnn;
  if (s == "rp" || s == "random-projection") return AugmenterKind::kRandomProjection;
  if (s == "identity" || s == "none") return AugmenterKind::kIdentity;
  throw ValidationError("unknown augmenter kind '" + std::string(s) + "'");
}

struct SubsetPartition {
  std::vector<std::vector<std::size_t>> subsets;
  std::uint64_t seed = 0;

  std::size_t num_features() const {
    std::size_t m = 0;
    for (const auto& s : subsets) m += s.size();
    return m;
  }
  friend bool operator==(const SubsetPartition&, const SubsetPartition&) = default;
};

/// Random permutation of 0..m-1 cut into J contiguous parts; the first
/// m % J parts get one extra index.
inline SubsetPartition partition_features(std::size_t m, std::size_t j, std::uint64_t seed) {
  if (j < 1 || j > m) {
    throw ValidationError("partition: need 1 <= J <= m (J=" + std::to_string(j) +
                          ", m=" + std::to_string(m) + ")");
  }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  SubsetPartition out;
  out.seed = seed;
  std::size_t at = 0;
  for (std::size_t s = 0; s < j; ++s) {
    std::size_t size = m / j + (s < m % j ? 1 : 0);
    out.subsets.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(at),
                             perm.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return out;
}

/// Learned state for one feature subset. ANN subsets standardize their
/// inputs with the stored column statistics; projections act on raw values.
struct SubsetState {
  std::optional<Mlp> net;
  std::vector<double> mean;
  std::vector<double> scale;
  Matrix projection;  // k x k

  friend bool operator==(const SubsetState&, const SubsetState&) = default;
};

struct AugmentOptions {
  AugmenterKind kind = AugmenterKind::kAnn;
  std::size_t subsets = 3;
  bool concatenate = true;
  MlpConfig mlp;  // widths are set per subset
};

class Augmenter {
 public:
  AugmenterKind kind = AugmenterKind::kIdentity;
  bool concatenate = true;
  std::size_t input_width = 0;
  SubsetPartition partition;
  std::vector<SubsetState> states;
  int fitted_at_stage = 0;

  std::size_t output_width() const {
    if (kind == AugmenterKind::kIdentity) return input_width;
    return concatenate ? 2 * input_width : input_width;
  }

  /// [X | g_1(X_s1) | ... | g_J(X_sJ)], or only the augmented blocks when
  /// concatenation is off. Identity returns X unchanged.
  Matrix transform(const Matrix& x) const {
    if (x.cols() != input_width) {
      throw ValidationError("augmenter: expected " + std::to_string(input_width) +
                            " features, got " + std::to_string(x.cols()));
    }
    if (kind == AugmenterKind::kIdentity) return x;
    std::vector<Matrix> blocks;
    if (concatenate) blocks.push_back(x);
    for (std::size_t j = 0; j < partition.subsets.size(); ++j) {
      blocks.push_back(subset_features(j, x));
    }
    return hconcat(blocks);
  }

  Matrix subset_features(std::size_t j, const Matrix& x) const {
    Matrix xs = select_columns(x, partition.subsets[j]);
    const SubsetState& st = states[j];
    if (kind == AugmenterKind::kAnn) {
      standardize(xs, st);
      return st.net->extract_features(xs);
    }
    const Matrix& p = st.projection;
    Matrix out(xs.rows(), p.cols());
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      for (std::size_t c = 0; c < p.cols(); ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) s += xs(r, i) * p(i, c);
        out(r, c) = s;
      }
    }
    return out;
  }

  static void standardize(Matrix& xs, const SubsetState& st) {
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      for (std::size_t c = 0; c < xs.cols(); ++c) {
        xs(r, c) = (xs(r, c) - st.mean[c]) / st.scale[c];
      }
    }
  }

  friend bool operator==(const Augmenter&, const Augmenter&) = default;
};

/// k x k matrix with entries drawn from Normal(0, 1/k).
inline Matrix gaussian_projection(std::size_t k, std::uint64_t seed) {
  Matrix p(k, k);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
  for (double& v : p.data()) v = gauss(rng);
  return p;
}

/// Fits one augmenter. For ANN subsets, `previous` (when given and shape
/// compatible) supplies warm-start networks that are transfer-retrained;
/// otherwise each network trains from scratch. `targets` is n x K: one-hot
/// labels or pseudo-residuals depending on the configured output mode.
inline Augmenter fit_augmenter(const AugmentOptions& opts, const Matrix& x,
                               const Matrix& targets, std::uint64_t seed,
                               const Augmenter* previous = nullptr, int stage = 0) {
  if (!all_finite(x)) throw ValidationError("augmenter: non-finite input");
  Augmenter aug;
  aug.kind = opts.kind;
  aug.concatenate = opts.concatenate;
  aug.input_width = x.cols();
  aug.fitted_at_stage = stage;
  if (opts.kind == AugmenterKind::kIdentity) return aug;

  aug.partition = partition_features(x.cols(), opts.subsets, derive_seed(seed, 0));
  for (std::size_t j = 0; j < aug.partition.subsets.size(); ++j) {
    const auto& cols = aug.partition.subsets[j];
    const std::size_t k = cols.size();
    SubsetState st;
    if (opts.kind == AugmenterKind::kRandomProjection) {
      st.projection = gaussian_projection(k, derive_seed(seed, 1 + j));
      aug.states.push_back(std::move(st));
      continue;
    }

    Matrix xs = select_columns(x, cols);
    st.mean.assign(k, 0.0);
    st.scale.assign(k, 0.0);
    const double n = static_cast<double>(xs.rows());
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      for (std::size_t c = 0; c < k; ++c) st.mean[c] += xs(r, c);
    }
    for (double& v : st.mean) v /= n;
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        double d = xs(r, c) - st.mean[c];
        st.scale[c] += d * d;
      }
    }
    for (double& v : st.scale) {
      v = std::sqrt(v / n);
      if (!(v > 0.0)) v = 1.0;
    }
    Augmenter::standardize(xs, st);

    MlpConfig cfg = opts.mlp;
    cfg.input_width = k;
    cfg.output_width = targets.cols();
    cfg.seed = derive_seed(seed, 1 + j);

    const Mlp* warm = nullptr;
    if (previous != nullptr && previous->kind == AugmenterKind::kAnn &&
        j < previous->states.size() && previous->states[j].net &&
        previous->states[j].net->input_width() == k &&
        previous->states[j].net->output_width() == cfg.output_width) {
      warm = &*previous->states[j].net;
    }
    st.net = warm != nullptr ? retrain_transfer(*warm, xs, targets, cfg)
                             : train(Mlp::init(cfg), xs, targets, cfg);
    aug.states.push_back(std::move(st));
  }
  return aug;
}

}  // namespace augboost

#endif  // AUGBOOST_AUGMENT_HPP
