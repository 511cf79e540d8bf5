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

// JSON encoding of configurations and trained models.
//
// Model documents carry the version tag "augboost-model/1". Tree nodes are
// stored as [feature, threshold, left, right, value, n_samples] with
// feature = -1 for leaves; matrices are nested row arrays. Doubles are
// written in shortest round-trip form, so save/load is lossless.

#ifndef AUGBOOST_SERIALIZE_HPP
#define AUGBOOST_SERIALIZE_HPP

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "augboost/boost.hpp"
#include "json.hpp"

namespace augboost {

using Json = nlohmann::json;

inline constexpr std::string_view kModelFormat = "augboost-model/1";

namespace detail {

/// Rejects keys of `obj` outside `allowed`.
inline void check_keys(const Json& obj, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ParseError(std::string(where) + ": expected a JSON object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) {
      throw ParseError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void read_opt(const Json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    try {
      out = it->get<T>();
    } catch (const Json::exception& e) {
      throw ParseError(std::string("key '") + key + "': " + e.what());
    }
  }
}

template <typename T>
T read_req(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("key '") + key + "': " + e.what());
  }
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw ParseError("matrix: expected an array of rows");
  if (j.empty()) return Matrix(0, cols_if_empty);
  const std::size_t cols = j.front().size();
  std::vector<double> data;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw ParseError("matrix: ragged rows");
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return Matrix(j.size(), cols, std::move(data));
}

inline std::string_view to_string(OutputMode mode) {
  return mode == OutputMode::kSoftmaxCrossEntropy ? "softmax-cross-entropy" : "linear-mse";
}

inline OutputMode parse_output_mode(std::string_view s) {
  if (s == "softmax-cross-entropy") return OutputMode::kSoftmaxCrossEntropy;
  if (s == "linear-mse") return OutputMode::kLinearMse;
  throw ParseError("unknown output_mode '" + std::string(s) + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Configuration documents

inline Json to_json(const GridMap& g) {
  return {{"origin", {g.origin().x, g.origin().y}},
          {"cell_width", g.cell_width()},
          {"cell_height", g.cell_height()},
          {"n_rows", g.n_rows()},
          {"n_cols", g.n_cols()},
          {"active_cells", std::vector<CellId>(g.active_cells().begin(), g.active_cells().end())}};
}

inline GridMap grid_from_json(const Json& j) {
  detail::check_keys(j, "grid",
                     {"origin", "cell_width", "cell_height", "n_rows", "n_cols", "active_cells"});
  GridMap d = default_grid();
  std::vector<double> origin{d.origin().x, d.origin().y};
  double cw = d.cell_width();
  double chh = d.cell_height();
  int rows = d.n_rows();
  int cols = d.n_cols();
  std::vector<CellId> active;
  detail::read_opt(j, "origin", origin);
  detail::read_opt(j, "cell_width", cw);
  detail::read_opt(j, "cell_height", chh);
  detail::read_opt(j, "n_rows", rows);
  detail::read_opt(j, "n_cols", cols);
  detail::read_opt(j, "active_cells", active);
  if (origin.size() != 2) throw ParseError("grid.origin must be [x, y]");
  return GridMap({origin[0], origin[1]}, cw, chh, rows, cols,
                 std::set<CellId>(active.begin(), active.end()));
}

inline Json to_json(const PathLossParams& p) {
  return {{"rssi_at_1m", p.rssi_at_1m},
          {"path_loss_exponent", p.path_loss_exponent},
          {"shadowing_sigma", p.shadowing_sigma},
          {"interference_burst_prob", p.interference_burst_prob},
          {"burst_offset", p.burst_offset},
          {"seed", p.seed}};
}

inline PathLossParams path_loss_from_json(const Json& j, PathLossParams p = {}) {
  detail::check_keys(j, "path_loss",
                     {"rssi_at_1m", "path_loss_exponent", "shadowing_sigma",
                      "interference_burst_prob", "burst_offset", "seed"});
  detail::read_opt(j, "rssi_at_1m", p.rssi_at_1m);
  detail::read_opt(j, "path_loss_exponent", p.path_loss_exponent);
  detail::read_opt(j, "shadowing_sigma", p.shadowing_sigma);
  detail::read_opt(j, "interference_burst_prob", p.interference_burst_prob);
  detail::read_opt(j, "burst_offset", p.burst_offset);
  detail::read_opt(j, "seed", p.seed);
  p.validate();
  return p;
}

inline Json to_json(const SplitPlan& s) {
  return {{"train_fraction", s.train_fraction}, {"repetitions", s.repetitions}, {"seed", s.seed}};
}

inline SplitPlan split_plan_from_json(const Json& j, SplitPlan s = {}) {
  detail::check_keys(j, "split", {"train_fraction", "repetitions", "seed"});
  detail::read_opt(j, "train_fraction", s.train_fraction);
  detail::read_opt(j, "repetitions", s.repetitions);
  detail::read_opt(j, "seed", s.seed);
  s.validate();
  return s;
}

/// Network training settings (widths are derived per subset, not stored).
inline Json to_json(const MlpConfig& c) {
  return {{"hidden_layers", Mlp::kHiddenLayers},
          {"output_mode", detail::to_string(c.output_mode)},
          {"adam",
           {{"learning_rate", c.adam.learning_rate},
            {"beta1", c.adam.beta1},
            {"beta2", c.adam.beta2},
            {"epsilon", c.adam.epsilon}}},
          {"max_epochs", c.max_epochs},
          {"patience", c.patience},
          {"min_improvement", c.min_improvement}};
}

inline MlpConfig mlp_config_from_json(const Json& j, MlpConfig c = {}) {
  detail::check_keys(j, "mlp",
                     {"hidden_layers", "output_mode", "adam", "max_epochs", "patience",
                      "min_improvement"});
  if (auto it = j.find("hidden_layers"); it != j.end() && it->get<int>() != 3) {
    throw ParseError("mlp.hidden_layers is fixed at 3");
  }
  if (auto it = j.find("output_mode"); it != j.end()) {
    c.output_mode = detail::parse_output_mode(it->get<std::string>());
  }
  if (auto it = j.find("adam"); it != j.end()) {
    detail::check_keys(*it, "mlp.adam", {"learning_rate", "beta1", "beta2", "epsilon"});
    detail::read_opt(*it, "learning_rate", c.adam.learning_rate);
    detail::read_opt(*it, "beta1", c.adam.beta1);
    detail::read_opt(*it, "beta2", c.adam.beta2);
    detail::read_opt(*it, "epsilon", c.adam.epsilon);
  }
  detail::read_opt(j, "max_epochs", c.max_epochs);
  detail::read_opt(j, "patience", c.patience);
  detail::read_opt(j, "min_improvement", c.min_improvement);
  if (c.max_epochs < 1 || c.patience < 1) {
    throw ValidationError("mlp: max_epochs and patience must be positive");
  }
  if (!(c.adam.learning_rate > 0.0)) throw ValidationError("mlp: learning_rate must be positive");
  return c;
}

/// Boosting settings; the network settings live under "mlp".
inline Json to_json(const BoostConfig& c) {
  return {{"T", c.stages},
          {"c_BA", c.refresh_period},
          {"J", c.augment.subsets},
          {"augmenter", to_string(c.augment.kind)},
          {"concatenate", c.augment.concatenate},
          {"tree",
           {{"max_depth", c.tree.max_depth},
            {"min_samples_leaf", c.tree.min_samples_leaf},
            {"min_samples_split", c.tree.min_samples_split}}},
          {"loss", to_string(c.loss)},
          {"shrinkage", c.shrinkage},
          {"line_search",
           {{"enabled", c.line_search.enabled},
            {"rho_max", c.line_search.rho_max},
            {"iterations", c.line_search.iterations}}},
          {"seed", c.seed}};
}

inline BoostConfig boost_config_from_json(const Json& j, BoostConfig c = {}) {
  detail::check_keys(j, "boost",
                     {"T", "c_BA", "J", "augmenter", "concatenate", "tree", "loss", "shrinkage",
                      "line_search", "seed"});
  detail::read_opt(j, "T", c.stages);
  detail::read_opt(j, "c_BA", c.refresh_period);
  detail::read_opt(j, "J", c.augment.subsets);
  if (auto it = j.find("augmenter"); it != j.end()) {
    c.augment.kind = parse_augmenter_kind(it->get<std::string>());
  }
  detail::read_opt(j, "concatenate", c.augment.concatenate);
  if (auto it = j.find("tree"); it != j.end()) {
    detail::check_keys(*it, "boost.tree", {"max_depth", "min_samples_leaf", "min_samples_split"});
    detail::read_opt(*it, "max_depth", c.tree.max_depth);
    detail::read_opt(*it, "min_samples_leaf", c.tree.min_samples_leaf);
    detail::read_opt(*it, "min_samples_split", c.tree.min_samples_split);
  }
  if (auto it = j.find("loss"); it != j.end()) c.loss = parse_boost_loss(it->get<std::string>());
  detail::read_opt(j, "shrinkage", c.shrinkage);
  if (auto it = j.find("line_search"); it != j.end()) {
    detail::check_keys(*it, "boost.line_search", {"enabled", "rho_max", "iterations"});
    detail::read_opt(*it, "enabled", c.line_search.enabled);
    detail::read_opt(*it, "rho_max", c.line_search.rho_max);
    detail::read_opt(*it, "iterations", c.line_search.iterations);
  }
  detail::read_opt(j, "seed", c.seed);
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Models

inline Json to_json(const RegressionTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes()) {
    nodes.push_back(Json::array({n.feature, n.threshold, n.left, n.right, n.value, n.n_samples}));
  }
  return nodes;
}

inline RegressionTree tree_from_json(const Json& j, std::size_t n_features) {
  if (!j.is_array() || j.empty()) throw ParseError("tree: expected a non-empty node array");
  std::vector<RegressionTree::Node> nodes;
  for (const auto& a : j) {
    if (!a.is_array() || a.size() != 6) throw ParseError("tree: malformed node");
    RegressionTree::Node n;
    n.feature = a[0].get<int>();
    n.threshold = a[1].get<double>();
    n.left = a[2].get<int>();
    n.right = a[3].get<int>();
    n.value = a[4].get<double>();
    n.n_samples = a[5].get<int>();
    nodes.push_back(n);
  }
  const int count = static_cast<int>(nodes.size());
  for (const auto& n : nodes) {
    if (n.is_leaf()) continue;
    if (n.feature >= static_cast<int>(n_features) || n.left <= 0 || n.left >= count ||
        n.right <= 0 || n.right >= count) {
      throw ParseError("tree: node references out of range");
    }
  }
  return RegressionTree(std::move(nodes), n_features);
}

inline Json to_json(const Mlp& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    layers.push_back({{"weights", detail::matrix_to_json(l.weights)},
                      {"bias", l.bias},
                      {"frozen", l.frozen}});
  }
  return {{"output_mode", detail::to_string(net.output_mode())},
          {"layers", layers},
          {"history", net.history()}};
}

inline Mlp mlp_from_json(const Json& j) {
  Mlp net;
  net.set_output_mode(detail::parse_output_mode(detail::read_req<std::string>(j, "output_mode")));
  const Json& layers = j.at("layers");
  if (!layers.is_array() || layers.size() != Mlp::kLayers) {
    throw ParseError("mlp: expected 4 layers");
  }
  for (std::size_t l = 0; l < Mlp::kLayers; ++l) {
    DenseLayer& d = net.layers()[l];
    d.weights = detail::matrix_from_json(layers[l].at("weights"));
    d.bias = layers[l].at("bias").get<std::vector<double>>();
    d.frozen = layers[l].at("frozen").get<bool>();
    if (d.bias.size() != d.weights.cols()) throw ParseError("mlp: bias width mismatch");
    if (l > 0 && d.weights.rows() != net.layers()[l - 1].weights.cols()) {
      throw ParseError("mlp: layer shapes do not chain");
    }
  }
  detail::read_opt(j, "history", net.history());
  return net;
}

inline Json to_json(const Augmenter& a) {
  Json subsets = Json::array();
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    const SubsetState& st = a.states[s];
    Json js = {{"features", a.partition.subsets[s]}};
    if (a.kind == AugmenterKind::kAnn) {
      js["mean"] = st.mean;
      js["scale"] = st.scale;
      js["network"] = to_json(*st.net);
    } else {
      js["projection"] = detail::matrix_to_json(st.projection);
    }
    subsets.push_back(std::move(js));
  }
  return {{"kind", to_string(a.kind)},
          {"concatenate", a.concatenate},
          {"input_width", a.input_width},
          {"fitted_at_stage", a.fitted_at_stage},
          {"partition_seed", a.partition.seed},
          {"subsets", subsets}};
}

inline Augmenter augmenter_from_json(const Json& j) {
  Augmenter a;
  a.kind = parse_augmenter_kind(detail::read_req<std::string>(j, "kind"));
  a.concatenate = detail::read_req<bool>(j, "concatenate");
  a.input_width = detail::read_req<std::size_t>(j, "input_width");
  a.fitted_at_stage = detail::read_req<int>(j, "fitted_at_stage");
  a.partition.seed = detail::read_req<std::uint64_t>(j, "partition_seed");
  std::vector<std::uint8_t> seen(a.input_width, 0);
  for (const auto& js : j.at("subsets")) {
    auto features = js.at("features").get<std::vector<std::size_t>>();
    for (auto f : features) {
      if (f >= a.input_width || seen[f]) throw ParseError("augmenter: invalid partition");
      seen[f] = 1;
    }
    SubsetState st;
    if (a.kind == AugmenterKind::kAnn) {
      st.mean = js.at("mean").get<std::vector<double>>();
      st.scale = js.at("scale").get<std::vector<double>>();
      st.net = mlp_from_json(js.at("network"));
      if (st.net->input_width() != features.size() || st.mean.size() != features.size() ||
          st.scale.size() != features.size()) {
        throw ParseError("augmenter: network width does not match its subset");
      }
    } else if (a.kind == AugmenterKind::kRandomProjection) {
      st.projection = detail::matrix_from_json(js.at("projection"));
      if (st.projection.rows() != features.size()) {
        throw ParseError("augmenter: projection shape does not match its subset");
      }
    }
    a.partition.subsets.push_back(std::move(features));
    a.states.push_back(std::move(st));
  }
  if (a.kind != AugmenterKind::kIdentity &&
      std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ParseError("augmenter: partition does not cover every feature");
  }
  return a;
}

inline Json to_json(const BoostModel& m) {
  Json augmenters = Json::array();
  for (const auto& a : m.augmenters) augmenters.push_back(to_json(a));
  Json stages = Json::array();
  for (const auto& s : m.stages) {
    Json trees = Json::array();
    for (const auto& t : s.trees) trees.push_back(to_json(t));
    stages.push_back({{"augmenter", s.augmenter}, {"rho", s.rho}, {"step", s.step},
                      {"trees", trees}});
  }
  return {{"format", kModelFormat},
          {"config", {{"boost", to_json(m.config)}, {"mlp", to_json(m.config.augment.mlp)}}},
          {"num_features", m.num_features},
          {"labels", m.labels},
          {"init_scores", m.init_scores},
          {"training_loss", m.training_loss},
          {"augmenters", augmenters},
          {"stages", stages}};
}

/// Parses and structurally validates a model document.
inline BoostModel model_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("format", std::string()) != kModelFormat) {
      throw ParseError("model: missing or unsupported format tag");
    }
    detail::check_keys(j, "model",
                       {"format", "config", "num_features", "labels", "init_scores",
                        "training_loss", "augmenters", "stages"});
    BoostModel m;
    const Json& cfg = j.at("config");
    m.config = boost_config_from_json(cfg.at("boost"));
    m.config.augment.mlp = mlp_config_from_json(cfg.at("mlp"));
    m.num_features = detail::read_req<std::size_t>(j, "num_features");
    m.labels = detail::read_req<std::vector<CellId>>(j, "labels");
    m.init_scores = detail::read_req<std::vector<double>>(j, "init_scores");
    detail::read_opt(j, "training_loss", m.training_loss);
    if (m.labels.empty() || m.init_scores.size() != m.labels.size()) {
      throw ParseError("model: labels and init_scores must be non-empty and equally long");
    }
    if (!std::is_sorted(m.labels.begin(), m.labels.end())) {
      throw ParseError("model: labels must be ascending");
    }
    for (const auto& ja : j.at("augmenters")) {
      m.augmenters.push_back(augmenter_from_json(ja));
      if (m.augmenters.back().input_width != m.num_features) {
        throw ParseError("model: augmenter input width differs from num_features");
      }
    }
    for (const auto& js : j.at("stages")) {
      BoostStage s;
      s.augmenter = detail::read_req<int>(js, "augmenter");
      s.rho = detail::read_req<double>(js, "rho");
      s.step = detail::read_req<double>(js, "step");
      if (s.augmenter < 0 || static_cast<std::size_t>(s.augmenter) >= m.augmenters.size()) {
        throw ParseError("model: stage references a missing augmenter");
      }
      const std::size_t width = m.augmenters[static_cast<std::size_t>(s.augmenter)].output_width();
      for (const auto& jt : js.at("trees")) s.trees.push_back(tree_from_json(jt, width));
      if (s.trees.size() != m.labels.size()) {
        throw ParseError("model: every stage needs one tree per class");
      }
      m.stages.push_back(std::move(s));
    }
    return m;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

inline std::string dump_model(const BoostModel& m) { return to_json(m).dump() + "\n"; }

inline void save_model(const std::string& path, const BoostModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << dump_model(m);
  if (!out) throw ParseError("write failed for '" + path + "'");
}

inline BoostModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("model '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace augboost

#endif  // AUGBOOST_SERIALIZE_HPP
