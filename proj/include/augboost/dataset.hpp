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

// RSSI fingerprint datasets: grid geometry, CSV ingestion, synthetic
// log-distance path-loss generation and repeated random train/test splits.

#ifndef AUGBOOST_DATASET_HPP
#define AUGBOOST_DATASET_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augboost/matrix.hpp"
#include "augboost/random.hpp"

namespace augboost {

inline constexpr double kMinRssi = -120.0;
inline constexpr double kMaxRssi = 0.0;

/// Cell identifier: row * n_cols + col.
using CellId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Rectangular floor map partitioned into equally sized cells.
class GridMap {
 public:
  GridMap() = default;

  /// An empty `active_cells` activates every cell of the map.
  GridMap(Point origin, double cell_width, double cell_height, int n_rows,
          int n_cols, std::set<CellId> active_cells = {})
      : origin_(origin),
        cell_width_(cell_width),
        cell_height_(cell_height),
        n_rows_(n_rows),
        n_cols_(n_cols),
        active_(std::move(active_cells)) {
    if (!(cell_width_ > 0.0) || !(cell_height_ > 0.0)) {
      throw ValidationError("GridMap: cell dimensions must be positive");
    }
    if (n_rows_ <= 0 || n_cols_ <= 0) {
      throw ValidationError("GridMap: n_rows and n_cols must be positive");
    }
    if (active_.empty()) {
      for (CellId c = 0; c < n_rows_ * n_cols_; ++c) active_.insert(c);
    }
    for (CellId c : active_) {
      if (c < 0 || c >= n_rows_ * n_cols_) {
        throw ValidationError("GridMap: active cell " + std::to_string(c) +
                              " lies outside the map");
      }
    }
  }

  /// Builds the grid covering a `width` x `height` rectangle, rounding the
  /// cell counts to the nearest integer.
  static GridMap covering(Point origin, double width, double height,
                          double cell_width, double cell_height) {
    int cols = static_cast<int>(std::lround(width / cell_width));
    int rows = static_cast<int>(std::lround(height / cell_height));
    return GridMap(origin, cell_width, cell_height, rows, cols);
  }

  Point origin() const { return origin_; }
  double cell_width() const { return cell_width_; }
  double cell_height() const { return cell_height_; }
  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  double width() const { return n_cols_ * cell_width_; }
  double height() const { return n_rows_ * cell_height_; }
  const std::set<CellId>& active_cells() const { return active_; }

  bool contains(CellId label) const { return active_.count(label) > 0; }

  bool inside(Point p) const {
    return p.x >= origin_.x && p.x <= origin_.x + width() &&
           p.y >= origin_.y && p.y <= origin_.y + height();
  }

  CellId label_of(int row, int col) const {
    if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) {
      throw ValidationError("GridMap: (row, col) out of range");
    }
    return row * n_cols_ + col;
  }

  std::pair<int, int> row_col(CellId label) const {
    require(label);
    return {label / n_cols_, label % n_cols_};
  }

  Point center(CellId label) const {
    auto [row, col] = row_col(label);
    return {origin_.x + (col + 0.5) * cell_width_,
            origin_.y + (row + 0.5) * cell_height_};
  }

  void require(CellId label) const {
    if (!contains(label)) {
      throw ValidationError("unknown cell label " + std::to_string(label));
    }
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  Point origin_;
  double cell_width_ = 1.0;
  double cell_height_ = 1.0;
  int n_rows_ = 1;
  int n_cols_ = 1;
  std::set<CellId> active_;
};

inline Point cell_center(const GridMap& grid, CellId label) {
  return grid.center(label);
}

/// N x m RSSI matrix with per-sample cell labels. Missing readings are
/// stored as NaN and flagged in `missing`.
struct FingerprintDataset {
  Matrix rssi;
  std::vector<CellId> labels;
  std::vector<std::string> beacon_ids;
  std::vector<std::uint8_t> missing;  // row-major N x m

  std::size_t size() const { return labels.size(); }
  std::size_t num_beacons() const { return beacon_ids.size(); }

  bool is_missing(std::size_t i, std::size_t j) const {
    return missing[i * num_beacons() + j] != 0;
  }
  bool any_missing() const {
    return std::any_of(missing.begin(), missing.end(),
                       [](std::uint8_t v) { return v != 0; });
  }

  /// Sorted distinct labels.
  std::vector<CellId> distinct_labels() const {
    std::set<CellId> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
  }

  FingerprintDataset subset(std::span<const std::size_t> rows) const {
    FingerprintDataset out;
    out.rssi = select_rows(rssi, rows);
    out.beacon_ids = beacon_ids;
    out.labels.reserve(rows.size());
    out.missing.reserve(rows.size() * num_beacons());
    for (std::size_t r : rows) {
      out.labels.push_back(labels[r]);
      auto first = missing.begin() + r * num_beacons();
      out.missing.insert(out.missing.end(), first, first + num_beacons());
    }
    return out;
  }

  friend bool operator==(const FingerprintDataset& a,
                         const FingerprintDataset& b) {
    if (a.labels != b.labels || a.beacon_ids != b.beacon_ids ||
        a.missing != b.missing || a.rssi.rows() != b.rssi.rows() ||
        a.rssi.cols() != b.rssi.cols()) {
      return false;
    }
    // NaN placeholders compare equal when both entries are missing.
    for (std::size_t k = 0; k < a.rssi.data().size(); ++k) {
      if (a.missing[k] && b.missing[k]) continue;
      if (a.rssi.data()[k] != b.rssi.data()[k]) return false;
    }
    return true;
  }
};

/// Checks the dataset invariants against `grid`; throws ValidationError.
inline void validate(const FingerprintDataset& ds, const GridMap& grid) {
  const std::size_t n = ds.size();
  const std::size_t m = ds.num_beacons();
  if (n == 0 || m == 0) {
    throw ValidationError("dataset must have at least one row and one beacon");
  }
  if (ds.rssi.rows() != n || ds.rssi.cols() != m || ds.missing.size() != n * m) {
    throw ValidationError("dataset: inconsistent shapes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    grid.require(ds.labels[i]);
    for (std::size_t j = 0; j < m; ++j) {
      if (ds.is_missing(i, j)) continue;
      double v = ds.rssi(i, j);
      if (!(v >= kMinRssi && v <= kMaxRssi)) {
        throw ValidationError("row " + std::to_string(i + 1) + ", beacon '" +
                              ds.beacon_ids[j] + "': RSSI " +
                              std::to_string(v) + " outside [-120, 0] dBm");
      }
    }
  }
}

namespace detail {

// Splits one CSV record. Double quotes delimit fields that may contain
// commas; "" inside a quoted field is a literal quote.
inline std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// Parses `b1,...,bm,label` CSV. Data rows are numbered from 1 in error
/// messages (the header is not counted).
inline FingerprintDataset parse_csv(std::istream& in, const GridMap& grid) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("CSV: missing header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  auto header = detail::split_csv_record(line);
  for (auto& h : header) h = std::string(detail::trim(h));
  if (header.size() < 2 || header.back() != "label") {
    throw ParseError(
        "CSV: header must list at least one beacon id followed by 'label'");
  }
  FingerprintDataset ds;
  ds.beacon_ids.assign(header.begin(), header.end() - 1);
  const std::size_t m = ds.beacon_ids.size();

  std::vector<double> values;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row_number;
    auto fields = detail::split_csv_record(line);
    if (fields.size() != m + 1) {
      throw ParseError("CSV row " + std::to_string(row_number) + ": expected " +
                       std::to_string(m) + " RSSI fields plus label, got " +
                       std::to_string(fields.size() - 1) + " RSSI fields");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (detail::trim(fields[j]).empty()) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        ds.missing.push_back(1);
        continue;
      }
      double v = 0.0;
      if (!detail::parse_number(fields[j], v)) {
        throw ParseError("CSV row " + std::to_string(row_number) +
                         ": cannot parse RSSI field '" + fields[j] + "'");
      }
      values.push_back(v);
      ds.missing.push_back(0);
    }
    CellId label = 0;
    if (!detail::parse_number(fields[m], label)) {
      throw ParseError("CSV row " + std::to_string(row_number) +
                       ": cannot parse label '" + fields[m] + "'");
    }
    if (!grid.contains(label)) {
      throw ValidationError("CSV row " + std::to_string(row_number) +
                            ": unknown cell label " + std::to_string(label));
    }
    ds.labels.push_back(label);
  }
  ds.rssi = Matrix(ds.labels.size(), m, std::move(values));
  if (ds.size() > 0) validate(ds, grid);
  return ds;
}

inline FingerprintDataset load_csv(const std::string& path,
                                   const GridMap& grid) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_csv(in, grid);
}

inline void write_csv(std::ostream& out, const FingerprintDataset& ds) {
  for (const auto& id : ds.beacon_ids) out << detail::quote_if_needed(id) << ',';
  out << "label\r\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.num_beacons(); ++j) {
      if (!ds.is_missing(i, j)) out << format_double(ds.rssi(i, j));
      out << ',';
    }
    out << ds.labels[i] << "\r\n";
  }
}

inline void save_csv(const std::string& path, const FingerprintDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_csv(out, ds);
  if (!out) throw ParseError("write failed for '" + path + "'");
}

/// Replaces every missing reading with `floor` dBm and clears the mask.
inline FingerprintDataset impute_missing(FingerprintDataset ds,
                                         double floor = -100.0) {
  if (!(floor >= kMinRssi && floor <= kMaxRssi)) {
    throw ValidationError("impute floor must lie in [-120, 0] dBm");
  }
  for (std::size_t k = 0; k < ds.missing.size(); ++k) {
    if (ds.missing[k]) {
      ds.rssi.data()[k] = floor;
      ds.missing[k] = 0;
    }
  }
  return ds;
}

struct PathLossParams {
  double rssi_at_1m = -45.0;
  double path_loss_exponent = 2.2;
  double shadowing_sigma = 4.0;
  double interference_burst_prob = 0.05;
  double burst_offset = -10.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(path_loss_exponent > 0.0)) {
      throw ValidationError("path_loss_exponent must be positive");
    }
    if (!(shadowing_sigma >= 0.0)) {
      throw ValidationError("shadowing_sigma must be non-negative");
    }
    if (!(interference_burst_prob >= 0.0 && interference_burst_prob <= 1.0)) {
      throw ValidationError("interference_burst_prob must lie in [0, 1]");
    }
  }
};

/// Mean received power at distance `d` meters, before noise and clamping.
inline double log_distance_rssi(const PathLossParams& p, double d) {
  return p.rssi_at_1m - 10.0 * p.path_loss_exponent * std::log10(std::max(d, 0.1));
}

/// Draws a fingerprint for every trajectory step. Beacons outside the map
/// only produce a warning.
inline FingerprintDataset synthesize(const GridMap& grid,
                                     std::span<const Point> beacons,
                                     const PathLossParams& params,
                                     std::span<const CellId> trajectory,
                                     std::vector<std::string>* warnings = nullptr) {
  params.validate();
  if (beacons.empty()) throw ValidationError("synthesize: no beacons");
  if (trajectory.empty()) throw ValidationError("synthesize: empty trajectory");
  for (CellId c : trajectory) grid.require(c);
  for (std::size_t b = 0; b < beacons.size(); ++b) {
    if (!grid.inside(beacons[b]) && warnings != nullptr) {
      warnings->push_back("beacon b" + std::to_string(b + 1) +
                          " lies outside the map rectangle");
    }
  }

  const std::size_t n = trajectory.size();
  const std::size_t m = beacons.size();
  FingerprintDataset ds;
  ds.rssi = Matrix(n, m);
  ds.labels.assign(trajectory.begin(), trajectory.end());
  ds.missing.assign(n * m, 0);
  for (std::size_t b = 0; b < m; ++b) ds.beacon_ids.push_back("b" + std::to_string(b + 1));

  Rng rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    Point at = grid.center(trajectory[i]);
    for (std::size_t b = 0; b < m; ++b) {
      // Both draws are always taken so the stream layout does not depend on
      // the noise settings.
      double z = gauss(rng);
      double u = unif(rng);
      double v = log_distance_rssi(params, distance(at, beacons[b])) +
                 params.shadowing_sigma * z;
      if (u < params.interference_burst_prob) v += params.burst_offset;
      ds.rssi(i, b) = std::clamp(v, kMinRssi, kMaxRssi);
    }
  }
  return ds;
}

/// Picks `visited_cells` distinct active cells in random order and dwells in
/// each for a contiguous block of near-equal length, `steps` samples total.
inline std::vector<CellId> make_trajectory(const GridMap& grid,
                                           std::size_t visited_cells,
                                           std::size_t steps,
                                           std::uint64_t seed) {
  const auto& active = grid.active_cells();
  if (visited_cells == 0 || visited_cells > active.size()) {
    throw ValidationError("visited_cells must lie in [1, " +
                          std::to_string(active.size()) + "]");
  }
  if (steps < visited_cells) {
    throw ValidationError("trajectory needs at least one step per visited cell");
  }
  std::vector<CellId> cells(active.begin(), active.end());
  Rng rng(seed);
  std::shuffle(cells.begin(), cells.end(), rng);
  cells.resize(visited_cells);

  std::vector<CellId> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < visited_cells; ++k) {
    std::size_t dwell = steps / visited_cells + (k < steps % visited_cells ? 1 : 0);
    out.insert(out.end(), dwell, cells[k]);
  }
  return out;
}

/// Ten beacons on a 2 x 5 lattice with 4 m spacing. The lattice is offset
/// from the map's mirror axes so that noiseless fingerprints are unique
/// per cell of the default 12.5 x 18 m map.
inline std::vector<Point> default_beacons() {
  std::vector<Point> out;
  for (double y : {1.2, 5.2, 9.2, 13.2, 17.2}) {
    for (double x : {4.0, 8.0}) out.push_back({x, y});
  }
  return out;
}

inline GridMap default_grid() {
  return GridMap::covering({0.0, 0.0}, 12.5, 18.0, 1.25, 1.5);
}

struct SplitPlan {
  double train_fraction = 0.7;
  int repetitions = 8;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw ValidationError("train_fraction must lie in (0, 1)");
    }
    if (repetitions < 1) throw ValidationError("repetitions must be positive");
  }
};

struct TrainTestSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Repeated random subsampling. Each repetition draws an independent
/// uniform permutation from a seed derived from (plan.seed, repetition).
inline std::vector<TrainTestSplit> split(std::size_t n, const SplitPlan& plan) {
  plan.validate();
  const auto n_train =
      static_cast<std::size_t>(std::floor(plan.train_fraction * n + 1e-9));
  if (n_train < 1 || n_train >= n) {
    throw ValidationError("split: N=" + std::to_string(n) +
                          " is too small for the requested train fraction");
  }
  std::vector<TrainTestSplit> out;
  for (int r = 0; r < plan.repetitions; ++r) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(r)));
    std::shuffle(perm.begin(), perm.end(), rng);
    TrainTestSplit s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<TrainTestSplit> split(const FingerprintDataset& ds,
                                         const SplitPlan& plan) {
  return split(ds.size(), plan);
}

}  // namespace augboost

#endif  // AUGBOOST_DATASET_HPP
