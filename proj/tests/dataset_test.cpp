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

#include "augboost/dataset.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace augboost {
namespace {

GridMap small_grid() { return GridMap({0.0, 0.0}, 1.25, 1.5, 2, 3); }

TEST(GridMapTest, CellCenters) {
  GridMap g = small_grid();
  Point p = cell_center(g, g.label_of(0, 0));
  EXPECT_DOUBLE_EQ(p.x, 0.625);
  EXPECT_DOUBLE_EQ(p.y, 0.75);
  p = cell_center(g, g.label_of(0, 1));
  EXPECT_DOUBLE_EQ(p.x, 1.875);
  EXPECT_DOUBLE_EQ(p.y, 0.75);
}

TEST(GridMapTest, DefaultMapHas120Cells) {
  GridMap g = default_grid();
  EXPECT_EQ(g.n_cols(), 10);
  EXPECT_EQ(g.n_rows(), 12);
  EXPECT_EQ(g.active_cells().size(), 120u);
}

TEST(GridMapTest, LabelRowColBijectionAndCentersInside) {
  GridMap g = default_grid();
  std::set<std::pair<int, int>> seen;
  for (CellId c : g.active_cells()) {
    auto rc = g.row_col(c);
    EXPECT_EQ(g.label_of(rc.first, rc.second), c);
    EXPECT_TRUE(seen.insert(rc).second);
    Point p = g.center(c);
    EXPECT_GT(p.x, g.origin().x);
    EXPECT_LT(p.x, g.origin().x + g.width());
    EXPECT_GT(p.y, g.origin().y);
    EXPECT_LT(p.y, g.origin().y + g.height());
  }
}

TEST(GridMapTest, RejectsBadGeometryAndUnknownLabels) {
  EXPECT_THROW(GridMap({0, 0}, 0.0, 1.0, 1, 1), ValidationError);
  EXPECT_THROW(GridMap({0, 0}, 1.0, 1.0, 0, 1), ValidationError);
  GridMap g({0, 0}, 1.0, 1.0, 2, 2, {0, 3});
  EXPECT_THROW(g.center(1), ValidationError);
  EXPECT_NO_THROW(g.center(3));
}

std::string csv_with_rows(int n, int m) {
  std::ostringstream s;
  for (int j = 0; j < m; ++j) s << "b" << j + 1 << ",";
  s << "label\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) s << -50 - i - j << ",";
    s << i % 6 << "\n";
  }
  return s.str();
}

TEST(CsvTest, ParsesShape) {
  std::istringstream in(csv_with_rows(3, 10));
  FingerprintDataset ds = parse_csv(in, small_grid());
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.num_beacons(), 10u);
  EXPECT_EQ(ds.rssi(2, 9), -61.0);
  EXPECT_EQ(ds.labels[1], 1);
}

TEST(CsvTest, ShortRowNamesRowNumber) {
  std::string text = "b1,b2,b3,label\n-50,-60,-70,0\n-50,-60,1\n";
  std::istringstream in(text);
  try {
    parse_csv(in, small_grid());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(CsvTest, UnknownLabelIsValidationError) {
  std::istringstream in("b1,label\n-50,99\n");
  EXPECT_THROW(parse_csv(in, small_grid()), ValidationError);
}

TEST(CsvTest, RejectsMissingLabelHeaderAndOutOfRangeValues) {
  std::istringstream no_label("b1,b2\n-50,-60\n");
  EXPECT_THROW(parse_csv(no_label, small_grid()), ParseError);
  std::istringstream positive("b1,label\n5,0\n");
  EXPECT_THROW(parse_csv(positive, small_grid()), ValidationError);
  std::istringstream garbage("b1,label\nabc,0\n");
  EXPECT_THROW(parse_csv(garbage, small_grid()), ParseError);
}

TEST(CsvTest, EmptyFieldsAreMissing) {
  std::istringstream in("b1,b2,label\r\n-50,,0\r\n,-70.5,1\r\n");
  FingerprintDataset ds = parse_csv(in, small_grid());
  EXPECT_FALSE(ds.is_missing(0, 0));
  EXPECT_TRUE(ds.is_missing(0, 1));
  EXPECT_TRUE(ds.is_missing(1, 0));
  EXPECT_EQ(ds.rssi(1, 1), -70.5);
}

TEST(CsvTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-120.0, 0.0);
  GridMap g = default_grid();
  FingerprintDataset ds;
  const std::size_t n = 200;
  const std::size_t m = 7;
  ds.rssi = Matrix(n, m);
  for (double& v : ds.rssi.data()) v = u(rng);
  ds.rssi(0, 0) = -120.0;
  ds.rssi(1, 1) = 0.0;
  ds.rssi(2, 2) = -1e-300;
  for (std::size_t j = 0; j < m; ++j) ds.beacon_ids.push_back("beacon \"" + std::to_string(j) + "\", x");
  ds.missing.assign(n * m, 0);
  ds.missing[5] = 1;
  ds.rssi.data()[5] = std::nan("");
  for (std::size_t i = 0; i < n; ++i) ds.labels.push_back(static_cast<CellId>(i % 120));

  std::stringstream buf;
  write_csv(buf, ds);
  FingerprintDataset back = parse_csv(buf, g);
  EXPECT_EQ(back, ds);
  for (std::size_t k = 0; k < n * m; ++k) {
    if (k == 5) continue;
    EXPECT_EQ(back.rssi.data()[k], ds.rssi.data()[k]);
  }
}

TEST(ImputeTest, Cases) {
  std::istringstream in("b1,b2,label\n-50,-60,0\n");
  FingerprintDataset full = parse_csv(in, small_grid());
  EXPECT_EQ(impute_missing(full, -100.0), full);

  std::istringstream one("b1,b2,label\n-50,,0\n");
  FingerprintDataset ds = impute_missing(parse_csv(one, small_grid()), -100.0);
  EXPECT_EQ(ds.rssi(0, 1), -100.0);
  EXPECT_EQ(ds.rssi(0, 0), -50.0);
  EXPECT_FALSE(ds.any_missing());

  std::istringstream all("b1,b2,label\n,,0\n,,1\n");
  ds = impute_missing(parse_csv(all, small_grid()), -95.0);
  for (double v : ds.rssi.data()) EXPECT_EQ(v, -95.0);

  EXPECT_THROW(impute_missing(ds, 3.0), ValidationError);
}

TEST(SynthesizeTest, LogDistanceArithmetic) {
  PathLossParams p;
  p.rssi_at_1m = -45.0;
  p.path_loss_exponent = 2.0;
  EXPECT_DOUBLE_EQ(log_distance_rssi(p, 10.0), -65.0);
  EXPECT_DOUBLE_EQ(log_distance_rssi(p, 1.0), -45.0);
  EXPECT_DOUBLE_EQ(log_distance_rssi(p, 0.0), log_distance_rssi(p, 0.1));
}

TEST(SynthesizeTest, NoiselessMatchesModelAndPlacesBeacon) {
  GridMap g = small_grid();
  PathLossParams p;
  p.rssi_at_1m = -45.0;
  p.path_loss_exponent = 2.0;
  p.shadowing_sigma = 0.0;
  p.interference_burst_prob = 0.0;
  Point c = g.center(0);
  std::vector<Point> beacons = {{c.x + 10.0, c.y}, {c.x + 1.0, c.y}};
  std::vector<CellId> traj = {0, 0};
  std::vector<std::string> warnings;
  FingerprintDataset ds = synthesize(g, beacons, p, traj, &warnings);
  EXPECT_NEAR(ds.rssi(0, 0), -65.0, 1e-12);
  EXPECT_NEAR(ds.rssi(0, 1), -45.0, 1e-12);
  EXPECT_EQ(warnings.size(), 1u);  // first beacon lies outside the 3.75 m wide map
  EXPECT_EQ(ds.beacon_ids, (std::vector<std::string>{"b1", "b2"}));
}

TEST(SynthesizeTest, EquidistantCellsGetEqualNoiselessRssi) {
  GridMap g = small_grid();
  PathLossParams p;
  p.shadowing_sigma = 0.0;
  p.interference_burst_prob = 0.0;
  // Beacon on the vertical axis through cell (0,1): cells (0,0) and (0,2)
  // are mirror images.
  Point mid = g.center(g.label_of(0, 1));
  std::vector<Point> beacons = {mid};
  std::vector<CellId> traj = {g.label_of(0, 0), g.label_of(0, 2)};
  FingerprintDataset ds = synthesize(g, beacons, p, traj);
  EXPECT_EQ(ds.rssi(0, 0), ds.rssi(1, 0));
}

TEST(SynthesizeTest, DeterministicAndClamped) {
  GridMap g = default_grid();
  auto beacons = default_beacons();
  PathLossParams p;
  p.seed = 11;
  p.shadowing_sigma = 40.0;  // forces clamping
  auto traj = make_trajectory(g, 54, 1090, 3);
  FingerprintDataset a = synthesize(g, beacons, p, traj);
  FingerprintDataset b = synthesize(g, beacons, p, traj);
  EXPECT_EQ(a.rssi, b.rssi);
  for (double v : a.rssi.data()) {
    EXPECT_GE(v, kMinRssi);
    EXPECT_LE(v, kMaxRssi);
  }
  p.seed = 12;
  EXPECT_NE(synthesize(g, beacons, p, traj).rssi, a.rssi);
}

TEST(SynthesizeTest, ContractErrors) {
  GridMap g = small_grid();
  PathLossParams p;
  std::vector<Point> beacons = {{1, 1}};
  std::vector<CellId> empty;
  EXPECT_THROW(synthesize(g, beacons, p, empty), ValidationError);
  p.path_loss_exponent = 0.0;
  std::vector<CellId> traj = {0};
  EXPECT_THROW(synthesize(g, beacons, p, traj), ValidationError);
}

TEST(TrajectoryTest, DefaultVisitsFiftyFourCells) {
  auto traj = make_trajectory(default_grid(), 54, 1090, 5);
  EXPECT_EQ(traj.size(), 1090u);
  EXPECT_EQ(std::set<CellId>(traj.begin(), traj.end()).size(), 54u);
  EXPECT_THROW(make_trajectory(default_grid(), 121, 1090, 5), ValidationError);
}

TEST(DefaultBeaconsTest, NoiselessFingerprintsAreUniquePerCell) {
  GridMap g = default_grid();
  PathLossParams p;
  p.shadowing_sigma = 0.0;
  p.interference_burst_prob = 0.0;
  std::vector<CellId> all(g.active_cells().begin(), g.active_cells().end());
  FingerprintDataset ds = synthesize(g, default_beacons(), p, all);
  double closest = 1e9;
  for (std::size_t a = 0; a < ds.size(); ++a) {
    for (std::size_t b = a + 1; b < ds.size(); ++b) {
      double d = 0.0;
      for (std::size_t j = 0; j < ds.num_beacons(); ++j) {
        d += std::pow(ds.rssi(a, j) - ds.rssi(b, j), 2);
      }
      closest = std::min(closest, std::sqrt(d));
    }
  }
  EXPECT_GT(closest, 0.01);
}

TEST(SplitTest, SizesDisjointCoverage) {
  SplitPlan plan{0.7, 8, 99};
  auto splits = split(10, plan);
  ASSERT_EQ(splits.size(), 8u);
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& s : splits) {
    EXPECT_EQ(s.train.size(), 7u);
    EXPECT_EQ(s.test.size(), 3u);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (auto i : s.test) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 10u);
    EXPECT_EQ(*all.rbegin(), 9u);
    distinct.insert(s.train);
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(SplitTest, EightRepetitionsDistinctOnLargerData) {
  auto splits = split(1090, SplitPlan{0.7, 8, 4});
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& s : splits) {
    EXPECT_EQ(s.train.size(), 763u);
    distinct.insert(s.train);
  }
  EXPECT_EQ(distinct.size(), 8u);
}

TEST(SplitTest, DeterministicAndValidated) {
  SplitPlan plan{0.7, 3, 5};
  auto a = split(50, plan);
  auto b = split(50, plan);
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].train, b[r].train);
    EXPECT_EQ(a[r].test, b[r].test);
  }
  EXPECT_THROW(split(1, plan), ValidationError);
  EXPECT_THROW(split(10, SplitPlan{1.0, 1, 0}), ValidationError);
  EXPECT_THROW(split(10, SplitPlan{0.5, 0, 0}), ValidationError);
}

}  // namespace
}  // namespace augboost
