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

// Gradient boosting with step-wise feature augmentation.
//
// Every `refresh_period` stages the augmenter is refit on fresh random
// feature subsets (ANN augmenters warm-start from the previous networks);
// in between it is reused. Each stage fits one regression tree per class
// to the negative gradient of the loss on the augmented design matrix and
// scales the stage by a line-searched weight.

#ifndef AUGBOOST_BOOST_HPP
#define AUGBOOST_BOOST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augboost/augment.hpp"
#include "augboost/dataset.hpp"
#include "augboost/matrix.hpp"
#include "augboost/random.hpp"
#include "augboost/tree.hpp"

namespace augboost {

enum class BoostLoss { kMulticlassLogLoss, kMse };

inline std::string_view to_string(BoostLoss loss) {
  return loss == BoostLoss::kMulticlassLogLoss ? "multiclass-log-loss" : "mse";
}

inline BoostLoss parse_boost_loss(std::string_view s) {
  if (s == "multiclass-log-loss" || s == "log-loss") return BoostLoss::kMulticlassLogLoss;
  if (s == "mse") return BoostLoss::kMse;
  throw ValidationError("unknown boosting loss '" + std::string(s) + "'");
}

struct LineSearchConfig {
  bool enabled = true;
  double rho_max = 10.0;
  int iterations = 40;
};

struct BoostConfig {
  int stages = 150;          // T
  int refresh_period = 15;   // c_BA
  AugmentOptions augment;    // kind, J, concatenation, network settings
  TreeConfig tree;
  BoostLoss loss = BoostLoss::kMulticlassLogLoss;
  double shrinkage = 0.1;    // nu
  LineSearchConfig line_search;
  std::uint64_t seed = 0;

  void validate() const {
    if (stages < 1) throw ValidationError("boost: T must be >= 1");
    if (refresh_period < 1) throw ValidationError("boost: c_BA must be >= 1");
    if (!(shrinkage > 0.0 && shrinkage <= 1.0)) {
      throw ValidationError("boost: shrinkage must lie in (0, 1]");
    }
    if (augment.subsets < 1) throw ValidationError("boost: J must be >= 1");
    if (line_search.enabled &&
        (!(line_search.rho_max > 0.0) || line_search.iterations < 1)) {
      throw ValidationError("boost: line search needs rho_max > 0 and iterations >= 1");
    }
    tree.validate();
  }
};

/// Number of augmenter fits for T stages refreshed every c_BA stages.
inline int augmenter_count(int stages, int refresh_period) {
  return (stages + refresh_period - 1) / refresh_period;
}

/// Zero-based augmenter index used by 1-based stage t.
inline int augmenter_for_stage(int t, int refresh_period) {
  return (t - 1) / refresh_period;
}

/// True when stage t refits the augmenter, i.e. (t - 1) mod c_BA == 0.
inline bool is_refresh_stage(int t, int refresh_period) {
  return (t - 1) % refresh_period == 0;
}

struct BoostStage {
  int augmenter = 0;
  std::vector<RegressionTree> trees;  // one per class
  double rho = 0.0;                   // line-search weight
  double step = 0.0;                  // shrinkage * rho, the applied multiplier

  friend bool operator==(const BoostStage&, const BoostStage&) = default;
};

struct BoostModel {
  BoostConfig config;
  std::size_t num_features = 0;
  std::vector<CellId> labels;  // class k <-> labels[k], ascending
  std::vector<double> init_scores;
  std::vector<Augmenter> augmenters;
  std::vector<BoostStage> stages;
  std::vector<double> training_loss;  // mean loss at F_0, then after each stage

  std::size_t num_classes() const { return labels.size(); }
};

// ---------------------------------------------------------------------------
// Losses

/// Maps each label to its index in the ascending `classes` list; labels
/// outside the list map to -1.
inline std::vector<int> class_indices(std::span<const CellId> labels,
                                      std::span<const CellId> classes) {
  std::map<CellId, int> index;
  for (std::size_t k = 0; k < classes.size(); ++k) index[classes[k]] = static_cast<int>(k);
  std::vector<int> out;
  out.reserve(labels.size());
  for (CellId l : labels) {
    auto it = index.find(l);
    out.push_back(it == index.end() ? -1 : it->second);
  }
  return out;
}

inline double log_sum_exp(std::span<const double> z) {
  double mx = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - mx);
  return mx + std::log(s);
}

/// F_0 under log-loss: ln of the empirical class priors.
inline std::vector<double> init_scores_log_loss(std::span<const int> classes, std::size_t k) {
  if (classes.empty()) throw ValidationError("init_scores: empty dataset");
  std::vector<double> counts(k, 0.0);
  for (int c : classes) counts[static_cast<std::size_t>(c)] += 1.0;
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0.0) {
      throw ValidationError("init_scores: class " + std::to_string(j) + " has no samples");
    }
    out[j] = std::log(counts[j] / static_cast<double>(classes.size()));
  }
  return out;
}

/// F_0 under squared error: column means of the target matrix.
inline std::vector<double> init_scores_mse(const Matrix& targets) {
  if (targets.rows() == 0) throw ValidationError("init_scores: empty dataset");
  std::vector<double> out(targets.cols(), 0.0);
  for (std::size_t r = 0; r < targets.rows(); ++r) {
    for (std::size_t c = 0; c < targets.cols(); ++c) out[c] += targets(r, c);
  }
  for (double& v : out) v /= static_cast<double>(targets.rows());
  return out;
}

/// Sum over samples of -log softmax(scores_i)[y_i].
inline double total_log_loss(const Matrix& scores, std::span<const int> classes) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto z = scores.row(i);
    total += log_sum_exp(z) - z[static_cast<std::size_t>(classes[i])];
  }
  return total;
}

/// Sum of squared differences between scores and targets.
inline double total_squared_error(const Matrix& scores, const Matrix& targets) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.data().size(); ++i) {
    double d = targets.data()[i] - scores.data()[i];
    total += d * d;
  }
  return total;
}

/// Negative gradient of the per-sample loss with respect to the scores.
/// Log-loss: onehot(y) - softmax(F). Squared error: t - F (the
/// conventional half-squared-error residual).
inline Matrix negative_gradient(const Matrix& scores, const Matrix& targets, BoostLoss loss) {
  Matrix g(scores.rows(), scores.cols());
  if (loss == BoostLoss::kMse) {
    for (std::size_t i = 0; i < g.data().size(); ++i) {
      g.data()[i] = targets.data()[i] - scores.data()[i];
    }
    return g;
  }
  Matrix p = softmax_rows(scores);
  for (std::size_t i = 0; i < g.data().size(); ++i) {
    g.data()[i] = targets.data()[i] - p.data()[i];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Stage weight

/// Golden-section search for the minimizer of a unimodal `f` on [lo, hi].
inline double golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (!std::isfinite(fc) || !std::isfinite(fd)) {
      throw TrainingError("line search: non-finite loss");
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

/// argmin over rho in [0, rho_max] of `total_loss(rho)`. Falls back to 0
/// when the search does not beat the unmoved model.
inline double line_search_rho(const std::function<double(double)>& total_loss,
                              const LineSearchConfig& cfg) {
  const double at_zero = total_loss(0.0);
  if (!std::isfinite(at_zero)) throw TrainingError("line search: non-finite loss");
  double rho = golden_section_minimize(total_loss, 0.0, cfg.rho_max, cfg.iterations);
  const double at_rho = total_loss(rho);
  if (!std::isfinite(at_rho)) throw TrainingError("line search: non-finite loss");
  return at_rho <= at_zero ? rho : 0.0;
}

namespace detail {

inline Matrix stage_loss_input(const Matrix& scores, const Matrix& direction, double rho) {
  Matrix out = scores;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += rho * direction.data()[i];
  return out;
}

inline double model_loss(const Matrix& scores, const Matrix& targets, std::span<const int> classes,
                         BoostLoss loss) {
  return loss == BoostLoss::kMulticlassLogLoss ? total_log_loss(scores, classes)
                                               : total_squared_error(scores, targets);
}

inline std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
  return out;
}

struct TrainingSet {
  std::vector<CellId> labels;
  std::vector<int> classes;
  Matrix targets;  // one-hot
  Matrix scores;   // F_0 broadcast
  std::vector<double> init;
};

inline TrainingSet prepare(const Matrix& x, std::span<const CellId> labels, const BoostConfig& cfg) {
  cfg.validate();
  if (x.rows() == 0) throw ValidationError("boost: empty dataset");
  if (labels.size() != x.rows()) throw ValidationError("boost: label count mismatch");
  if (!all_finite(x)) {
    throw ValidationError("boost: features must be finite (impute missing readings first)");
  }
  TrainingSet ts;
  std::set<CellId> distinct(labels.begin(), labels.end());
  ts.labels.assign(distinct.begin(), distinct.end());
  if (cfg.loss == BoostLoss::kMulticlassLogLoss && ts.labels.size() < 2) {
    throw ValidationError("boost: log-loss needs at least two classes");
  }
  ts.classes = class_indices(labels, ts.labels);
  const std::size_t k = ts.labels.size();
  ts.targets = one_hot(ts.classes, k);
  ts.init = cfg.loss == BoostLoss::kMulticlassLogLoss ? init_scores_log_loss(ts.classes, k)
                                                      : init_scores_mse(ts.targets);
  ts.scores = Matrix(x.rows(), k);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy(ts.init.begin(), ts.init.end(), ts.scores.row(r).begin());
  }
  return ts;
}

// Fits the K class trees of one stage on `design`, picks the stage weight
// and advances `scores`.
inline BoostStage fit_stage(const Matrix& design, const SortedColumns& sorted, TrainingSet& ts,
                            const BoostConfig& cfg, int augmenter) {
  const std::size_t k = ts.labels.size();
  Matrix residual = negative_gradient(ts.scores, ts.targets, cfg.loss);
  BoostStage stage;
  stage.augmenter = augmenter;
  Matrix direction(design.rows(), k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> target = column(residual, c);
    stage.trees.push_back(RegressionTree::fit(design, target, cfg.tree, sorted));
    std::vector<double> pred = stage.trees.back().predict(design);
    for (std::size_t r = 0; r < design.rows(); ++r) direction(r, c) = pred[r];
  }
  if (cfg.line_search.enabled) {
    stage.rho = line_search_rho(
        [&](double rho) {
          return model_loss(stage_loss_input(ts.scores, direction, rho), ts.targets, ts.classes,
                            cfg.loss);
        },
        cfg.line_search);
  } else {
    stage.rho = 1.0;
  }
  stage.step = cfg.shrinkage * stage.rho;
  for (std::size_t i = 0; i < ts.scores.data().size(); ++i) {
    ts.scores.data()[i] += stage.step * direction.data()[i];
  }
  return stage;
}

inline BoostModel start_model(const Matrix& x, const TrainingSet& ts, const BoostConfig& cfg) {
  BoostModel model;
  model.config = cfg;
  model.num_features = x.cols();
  model.labels = ts.labels;
  model.init_scores = ts.init;
  model.training_loss.push_back(
      model_loss(ts.scores, ts.targets, ts.classes, cfg.loss) / static_cast<double>(x.rows()));
  return model;
}

}  // namespace detail

/// Optional per-stage observer: (stage t, mean training loss after t).
using StageCallback = std::function<void(int, double)>;

/// Trains the augmented boosting model.
inline BoostModel fit(const Matrix& x, std::span<const CellId> labels, const BoostConfig& cfg,
                      const StageCallback& on_stage = {}) {
  auto ts = detail::prepare(x, labels, cfg);
  if (cfg.augment.kind != AugmenterKind::kIdentity && cfg.augment.subsets > x.cols()) {
    throw ValidationError("boost: J=" + std::to_string(cfg.augment.subsets) +
                          " exceeds the feature count m=" + std::to_string(x.cols()));
  }
  BoostModel model = detail::start_model(x, ts, cfg);
  Matrix design;
  std::optional<SortedColumns> sorted;
  for (int t = 1; t <= cfg.stages; ++t) {
    try {
      if (is_refresh_stage(t, cfg.refresh_period)) {
        const Matrix aug_targets =
            cfg.augment.mlp.output_mode == OutputMode::kSoftmaxCrossEntropy
                ? ts.targets
                : negative_gradient(ts.scores, ts.targets, cfg.loss);
        const auto refresh = static_cast<std::uint64_t>(model.augmenters.size());
        const Augmenter* previous = model.augmenters.empty() ? nullptr : &model.augmenters.back();
        model.augmenters.push_back(fit_augmenter(cfg.augment, x, aug_targets,
                                                 derive_seed(cfg.seed, refresh), previous, t));
        design = model.augmenters.back().transform(x);
        sorted.emplace(design);
      }
      model.stages.push_back(detail::fit_stage(design, *sorted, ts, cfg,
                                               augmenter_for_stage(t, cfg.refresh_period)));
    } catch (const std::exception& e) {
      throw TrainingError("stage " + std::to_string(t) + ": " + e.what());
    }
    model.training_loss.push_back(
        detail::model_loss(ts.scores, ts.targets, ts.classes, cfg.loss) /
        static_cast<double>(x.rows()));
    if (on_stage) on_stage(t, model.training_loss.back());
  }
  return model;
}

inline BoostModel fit(const FingerprintDataset& ds, const BoostConfig& cfg,
                      const StageCallback& on_stage = {}) {
  if (ds.any_missing()) {
    throw ValidationError("boost: dataset has missing readings; impute them first");
  }
  return fit(ds.rssi, ds.labels, cfg, on_stage);
}

/// Reference gradient-boosting loop with no augmentation layer. The model
/// records identity augmenters on the same schedule so that it is directly
/// comparable with `fit` under an identity augmenter.
inline BoostModel fit_plain_gbdt(const Matrix& x, std::span<const CellId> labels,
                                 const BoostConfig& cfg) {
  auto ts = detail::prepare(x, labels, cfg);
  BoostModel model = detail::start_model(x, ts, cfg);
  model.config.augment.kind = AugmenterKind::kIdentity;
  SortedColumns sorted(x);
  for (int t = 1; t <= cfg.stages; ++t) {
    if (is_refresh_stage(t, cfg.refresh_period)) {
      Augmenter none;
      none.kind = AugmenterKind::kIdentity;
      none.concatenate = cfg.augment.concatenate;
      none.input_width = x.cols();
      none.fitted_at_stage = t;
      model.augmenters.push_back(std::move(none));
    }
    model.stages.push_back(
        detail::fit_stage(x, sorted, ts, cfg, augmenter_for_stage(t, cfg.refresh_period)));
    model.training_loss.push_back(
        detail::model_loss(ts.scores, ts.targets, ts.classes, cfg.loss) /
        static_cast<double>(x.rows()));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Prediction

namespace detail {

// Runs F_0 + sum_s step_s D_s over the first `max_stages` stages, calling
// `visit(stage_index, scores)` after each one.
template <typename Visit>
Matrix accumulate_scores(const BoostModel& model, const Matrix& x, std::size_t max_stages,
                         Visit&& visit) {
  if (x.cols() != model.num_features) {
    throw ValidationError("model expects " + std::to_string(model.num_features) +
                          " features, got " + std::to_string(x.cols()));
  }
  const std::size_t k = model.num_classes();
  Matrix scores(x.rows(), k);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy(model.init_scores.begin(), model.init_scores.end(), scores.row(r).begin());
  }
  int cached = -1;
  Matrix design;
  const std::size_t n_stages = std::min(max_stages, model.stages.size());
  for (std::size_t s = 0; s < n_stages; ++s) {
    const BoostStage& stage = model.stages[s];
    if (stage.augmenter != cached) {
      design = model.augmenters.at(static_cast<std::size_t>(stage.augmenter)).transform(x);
      cached = stage.augmenter;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> pred = stage.trees[c].predict(design);
      for (std::size_t r = 0; r < x.rows(); ++r) scores(r, c) += stage.step * pred[r];
    }
    visit(s, scores);
  }
  return scores;
}

}  // namespace detail

/// Scores after every stage: element t-1 holds F_0 + sum_{s<=t} step_s D_s.
inline std::vector<Matrix> staged_predict(const BoostModel& model, const Matrix& x,
                                          std::size_t max_stages = SIZE_MAX) {
  std::vector<Matrix> out;
  detail::accumulate_scores(model, x, max_stages,
                            [&](std::size_t, const Matrix& scores) { out.push_back(scores); });
  return out;
}

inline Matrix predict_scores(const BoostModel& model, const Matrix& x) {
  return detail::accumulate_scores(model, x, SIZE_MAX, [](std::size_t, const Matrix&) {});
}

/// Label of the highest score per row; ties go to the lower class index.
inline std::vector<CellId> labels_from_scores(const BoostModel& model, const Matrix& scores) {
  std::vector<CellId> out;
  out.reserve(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    auto row = scores.row(r);
    auto best = std::max_element(row.begin(), row.end());
    out.push_back(model.labels[static_cast<std::size_t>(best - row.begin())]);
  }
  return out;
}

inline std::vector<CellId> predict_label(const BoostModel& model, const Matrix& x) {
  return labels_from_scores(model, predict_scores(model, x));
}

}  // namespace augboost

#endif  // AUGBOOST_BOOST_HPP
