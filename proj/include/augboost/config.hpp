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

// Experiment configuration: one JSON document covering the map, the
// synthetic generator, the network and boosting settings and the split
// plan. Every seed is derived from the root "seed" unless a section sets
// its own.

#ifndef AUGBOOST_CONFIG_HPP
#define AUGBOOST_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "augboost/serialize.hpp"

namespace augboost {

struct TrajectoryConfig {
  std::size_t steps = 1090;
  std::size_t visited_cells = 54;
  std::uint64_t seed = 0;
};

struct RunConfig {
  std::uint64_t seed = 2022;
  GridMap grid = default_grid();
  std::vector<Point> beacons = default_beacons();
  PathLossParams path_loss;
  TrajectoryConfig trajectory;
  double impute_floor = -100.0;
  BoostConfig boost;  // boost.augment.mlp holds the network settings
  SplitPlan split;
  std::vector<std::string> compare = {"ann", "rp", "identity"};
  std::string data;
  std::string out;

  /// Checks cross-section constraints before any work starts.
  void validate() const {
    path_loss.validate();
    boost.validate();
    split.validate();
    if (beacons.empty()) throw ValidationError("config: at least one beacon is required");
    if (boost.augment.kind != AugmenterKind::kIdentity && boost.augment.subsets > beacons.size()) {
      throw ValidationError("config: J=" + std::to_string(boost.augment.subsets) +
                            " exceeds the number of beacons m=" + std::to_string(beacons.size()));
    }
    if (!(impute_floor >= kMinRssi && impute_floor <= kMaxRssi)) {
      throw ValidationError("config: impute_floor must lie in [-120, 0] dBm");
    }
    for (const auto& name : compare) parse_augmenter_kind(name);
  }
};

namespace detail {

// Seed stream ids for sections that do not set their own seed.
enum SeedStream : std::uint64_t {
  kPathLossStream = 1,
  kTrajectoryStream = 2,
  kBoostStream = 3,
  kSplitStream = 4,
};

}  // namespace detail

/// Parses a run configuration. Absent keys take their defaults; unknown
/// keys are rejected. `seed_override` replaces the root seed and every
/// section seed.
inline RunConfig run_config_from_json(const Json& j,
                                      std::optional<std::uint64_t> seed_override = {}) {
  detail::check_keys(j, "config",
                     {"seed", "grid", "beacons", "path_loss", "trajectory", "impute_floor", "mlp",
                      "boost", "split", "compare", "data", "out"});
  RunConfig c;
  detail::read_opt(j, "seed", c.seed);
  if (seed_override) c.seed = *seed_override;
  const bool explicit_seeds = !seed_override.has_value();
  auto section_seed = [&](const Json* section, detail::SeedStream stream) {
    if (explicit_seeds && section != nullptr && section->contains("seed")) {
      return section->at("seed").get<std::uint64_t>();
    }
    return derive_seed(c.seed, stream);
  };
  auto find = [&](const char* key) -> const Json* {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  };

  if (auto* g = find("grid")) c.grid = grid_from_json(*g);
  if (auto* b = find("beacons")) {
    c.beacons.clear();
    for (const auto& p : *b) {
      auto xy = p.get<std::vector<double>>();
      if (xy.size() != 2) throw ParseError("beacons: each entry must be [x, y]");
      c.beacons.push_back({xy[0], xy[1]});
    }
  }
  const Json* pl = find("path_loss");
  if (pl) c.path_loss = path_loss_from_json(*pl);
  c.path_loss.seed = section_seed(pl, detail::kPathLossStream);

  const Json* tr = find("trajectory");
  if (tr) {
    detail::check_keys(*tr, "trajectory", {"steps", "visited_cells", "seed"});
    detail::read_opt(*tr, "steps", c.trajectory.steps);
    detail::read_opt(*tr, "visited_cells", c.trajectory.visited_cells);
  }
  c.trajectory.seed = section_seed(tr, detail::kTrajectoryStream);

  detail::read_opt(j, "impute_floor", c.impute_floor);
  if (auto* m = find("mlp")) c.boost.augment.mlp = mlp_config_from_json(*m);
  const Json* bo = find("boost");
  if (bo) {
    MlpConfig mlp = c.boost.augment.mlp;
    c.boost = boost_config_from_json(*bo);
    c.boost.augment.mlp = mlp;
  }
  c.boost.seed = section_seed(bo, detail::kBoostStream);

  const Json* sp = find("split");
  if (sp) c.split = split_plan_from_json(*sp);
  c.split.seed = section_seed(sp, detail::kSplitStream);

  detail::read_opt(j, "compare", c.compare);
  detail::read_opt(j, "data", c.data);
  detail::read_opt(j, "out", c.out);
  c.validate();
  return c;
}

inline RunConfig load_run_config(const std::string& path,
                                 std::optional<std::uint64_t> seed_override = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  return run_config_from_json(j, seed_override);
}

/// Default configuration with every seed resolved, as a JSON document.
inline Json to_json(const RunConfig& c) {
  Json beacons = Json::array();
  for (const auto& b : c.beacons) beacons.push_back({b.x, b.y});
  Json boost = to_json(c.boost);
  return {{"seed", c.seed},
          {"grid", to_json(c.grid)},
          {"beacons", beacons},
          {"path_loss", to_json(c.path_loss)},
          {"trajectory",
           {{"steps", c.trajectory.steps},
            {"visited_cells", c.trajectory.visited_cells},
            {"seed", c.trajectory.seed}}},
          {"impute_floor", c.impute_floor},
          {"mlp", to_json(c.boost.augment.mlp)},
          {"boost", boost},
          {"split", to_json(c.split)},
          {"compare", c.compare}};
}

/// Generates the synthetic dataset described by the configuration.
inline FingerprintDataset synthesize(const RunConfig& c,
                                     std::vector<std::string>* warnings = nullptr) {
  auto trajectory = make_trajectory(c.grid, c.trajectory.visited_cells, c.trajectory.steps,
                                    c.trajectory.seed);
  return synthesize(c.grid, c.beacons, c.path_loss, trajectory, warnings);
}

}  // namespace augboost

#endif  // AUGBOOST_CONFIG_HPP
