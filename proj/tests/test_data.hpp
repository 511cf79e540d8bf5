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

#ifndef AUGBOOST_TESTS_TEST_DATA_HPP
#define AUGBOOST_TESTS_TEST_DATA_HPP

#include "augboost/boost.hpp"
#include "augboost/dataset.hpp"

namespace augboost::testing {

/// Small synthetic problem on the default map: `cells` visited cells with
/// `per_cell` samples each.
inline FingerprintDataset small_dataset(std::size_t cells, std::size_t per_cell, double sigma,
                                        std::uint64_t seed) {
  GridMap grid = default_grid();
  PathLossParams p;
  p.shadowing_sigma = sigma;
  p.seed = seed;
  auto traj = make_trajectory(grid, cells, cells * per_cell, seed + 1);
  return synthesize(grid, default_beacons(), p, traj);
}

/// Fast boosting settings for unit tests.
inline BoostConfig quick_config(AugmenterKind kind, int stages, int refresh) {
  BoostConfig c;
  c.stages = stages;
  c.refresh_period = refresh;
  c.augment.kind = kind;
  c.augment.mlp.adam.learning_rate = 0.01;
  c.augment.mlp.max_epochs = 5;
  c.tree = TreeConfig{3, 5, 10};
  c.seed = 17;
  return c;
}

}  // namespace augboost::testing

#endif  // AUGBOOST_TESTS_TEST_DATA_HPP
