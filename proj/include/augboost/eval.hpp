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

// Repeated-holdout evaluation: Euclidean location error on the grid,
// held-out log-loss learning curves, and paired model comparisons.

#ifndef AUGBOOST_EVAL_HPP
#define AUGBOOST_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "augboost/boost.hpp"
#include "augboost/dataset.hpp"

namespace augboost {

/// Per-sample distance in meters between predicted and true cell centers.
inline std::vector<double> location_error(std::span<const CellId> predicted,
                                          std::span<const CellId> truth, const GridMap& grid) {
  if (predicted.size() != truth.size()) {
    throw ValidationError("location_error: label lists differ in length");
  }
  std::vector<double> out(predicted.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = distance(grid.center(predicted[i]), grid.center(truth[i]));
  }
  return out;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and population standard deviation sqrt(sum (x - mean)^2 / n).
inline MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean_std: empty list");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

/// "0.77 ± 0.30 m".
inline std::string format_mean_std(const MeanStd& ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f \xC2\xB1 %.2f m", ms.mean, ms.std);
  return buf;
}

inline constexpr double kProbabilityFloor = 1e-15;

/// Mean per-sample cross-entropy of softmax(scores) against `truth`.
/// Probabilities are floored at 1e-15; labels unknown to the model count
/// as probability-floor predictions.
inline double mean_cross_entropy(const Matrix& scores, std::span<const int> classes) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto z = scores.row(i);
    double p = 0.0;
    if (classes[i] >= 0) p = std::exp(z[static_cast<std::size_t>(classes[i])] - log_sum_exp(z));
    total -= std::log(std::max(p, kProbabilityFloor));
  }
  return total / static_cast<double>(scores.rows());
}

/// FNV-1a over the train then test indices; identifies a partition.
inline std::uint64_t split_hash(const TrainTestSplit& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  for (auto i : s.train) mix(i);
  mix(~std::uint64_t{0});
  for (auto i : s.test) mix(i);
  return h;
}

struct RepetitionResult {
  double mean_error = 0.0;  // meters
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::uint64_t split_hash = 0;
  std::vector<double> test_log_loss;  // per stage, mean cross-entropy
  std::vector<std::pair<CellId, CellId>> mistakes;  // (true, predicted)
};

struct CurvePoint {
  int iteration = 0;
  double mean_log10_loss = 0.0;
  double std_log10_loss = 0.0;
};

struct ConfusionEntry {
  CellId truth = 0;
  CellId predicted = 0;
  int count = 0;
};

struct EvalReport {
  std::string name;
  std::vector<RepetitionResult> repetitions;
  MeanStd error;
  std::vector<CurvePoint> curve;  // empty unless the loss is log-loss
  std::vector<ConfusionEntry> confusion;

  std::vector<double> repetition_errors() const {
    std::vector<double> out;
    for (const auto& r : repetitions) out.push_back(r.mean_error);
    return out;
  }
};

/// Optional observer invoked after each repetition: (index, result).
using RepetitionCallback = std::function<void(int, const RepetitionResult&)>;

/// Trains one model per split and scores it on the held-out part.
inline RepetitionResult run_repetition(const FingerprintDataset& ds, const GridMap& grid,
                                       const BoostConfig& cfg, const TrainTestSplit& s) {
  FingerprintDataset train = ds.subset(s.train);
  FingerprintDataset test = ds.subset(s.test);
  BoostModel model = fit(train, cfg);

  RepetitionResult out;
  out.train_size = s.train.size();
  out.test_size = s.test.size();
  out.split_hash = split_hash(s);

  const bool log_loss = cfg.loss == BoostLoss::kMulticlassLogLoss;
  const std::vector<int> classes = class_indices(test.labels, model.labels);
  Matrix final_scores = detail::accumulate_scores(
      model, test.rssi, SIZE_MAX, [&](std::size_t, const Matrix& scores) {
        if (log_loss) out.test_log_loss.push_back(mean_cross_entropy(scores, classes));
      });
  std::vector<CellId> predicted = labels_from_scores(model, final_scores);
  std::vector<double> err = location_error(predicted, test.labels, grid);
  out.mean_error = mean_std(err).mean;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] != test.labels[i]) out.mistakes.emplace_back(test.labels[i], predicted[i]);
  }
  return out;
}

inline std::vector<ConfusionEntry> top_confusions(std::span<const RepetitionResult> reps,
                                                  std::size_t limit = 10) {
  std::map<std::pair<CellId, CellId>, int> counts;
  for (const auto& r : reps) {
    for (const auto& m : r.mistakes) ++counts[m];
  }
  std::vector<ConfusionEntry> out;
  for (const auto& [pair, count] : counts) out.push_back({pair.first, pair.second, count});
  std::stable_sort(out.begin(), out.end(),
                   [](const ConfusionEntry& a, const ConfusionEntry& b) { return a.count > b.count; });
  if (out.size() > limit) out.resize(limit);
  return out;
}

/// Mean and spread across repetitions of log10(mean held-out log-loss),
/// per boosting iteration.
inline std::vector<CurvePoint> curve_from(std::span<const RepetitionResult> reps) {
  std::vector<CurvePoint> out;
  if (reps.empty() || reps.front().test_log_loss.empty()) return out;
  const std::size_t t_max = reps.front().test_log_loss.size();
  for (std::size_t t = 0; t < t_max; ++t) {
    std::vector<double> v;
    for (const auto& r : reps) v.push_back(std::log10(r.test_log_loss.at(t)));
    MeanStd ms = mean_std(v);
    out.push_back({static_cast<int>(t + 1), ms.mean, ms.std});
  }
  return out;
}

/// Seed used to train repetition `rep`.
inline BoostConfig repetition_config(const BoostConfig& cfg, int rep) {
  BoostConfig c = cfg;
  c.seed = derive_seed(cfg.seed, 0x5EED0000ULL + static_cast<std::uint64_t>(rep));
  return c;
}

inline EvalReport evaluate(const FingerprintDataset& ds, const GridMap& grid,
                           const BoostConfig& cfg, const SplitPlan& plan,
                           const RepetitionCallback& on_repetition = {}) {
  auto splits = split(ds, plan);
  EvalReport report;
  report.name = std::string(to_string(cfg.augment.kind));
  for (std::size_t r = 0; r < splits.size(); ++r) {
    try {
      report.repetitions.push_back(
          run_repetition(ds, grid, repetition_config(cfg, static_cast<int>(r)), splits[r]));
    } catch (const TrainingError& e) {
      throw TrainingError("repetition " + std::to_string(r + 1) + ": " + e.what());
    }
    if (on_repetition) on_repetition(static_cast<int>(r), report.repetitions.back());
  }
  report.error = mean_std(report.repetition_errors());
  report.curve = curve_from(report.repetitions);
  report.confusion = top_confusions(report.repetitions);
  return report;
}

inline std::vector<CurvePoint> learning_curve(const FingerprintDataset& ds, const GridMap& grid,
                                              const BoostConfig& cfg, const SplitPlan& plan) {
  if (cfg.loss != BoostLoss::kMulticlassLogLoss) {
    throw ValidationError("learning_curve: requires multiclass log-loss");
  }
  return evaluate(ds, grid, cfg, plan).curve;
}

struct NamedConfig {
  std::string name;
  BoostConfig config;
};

struct Comparison {
  std::vector<EvalReport> reports;   // input order
  std::vector<std::size_t> ranking;  // report indices, lowest mean error first
};

/// Evaluates every configuration on the same splits.
inline Comparison compare(const FingerprintDataset& ds, const GridMap& grid,
                          std::span<const NamedConfig> configs, const SplitPlan& plan) {
  if (configs.size() < 2) throw ValidationError("compare: need at least two configurations");
  Comparison out;
  for (const auto& nc : configs) {
    EvalReport r = evaluate(ds, grid, nc.config, plan);
    r.name = nc.name;
    out.reports.push_back(std::move(r));
  }
  out.ranking.resize(out.reports.size());
  std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t a, std::size_t b) {
    return out.reports[a].error.mean < out.reports[b].error.mean;
  });
  return out;
}

}  // namespace augboost

#endif  // AUGBOOST_EVAL_HPP
