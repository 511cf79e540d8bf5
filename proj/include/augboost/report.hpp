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

// CSV (RFC 4180, CRLF) and JSON writers for evaluation reports.

#ifndef AUGBOOST_REPORT_HPP
#define AUGBOOST_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "augboost/eval.hpp"
#include "augboost/serialize.hpp"

namespace augboost {

inline std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// One row per repetition.
inline void write_repetitions_csv(std::ostream& out, const EvalReport& r) {
  out << "repetition,mean_error_m,train_size,test_size,split_hash\r\n";
  for (std::size_t i = 0; i < r.repetitions.size(); ++i) {
    const auto& rep = r.repetitions[i];
    out << i + 1 << ',' << format_double(rep.mean_error) << ',' << rep.train_size << ','
        << rep.test_size << ',' << hex64(rep.split_hash) << "\r\n";
  }
}

/// One row per boosting iteration.
inline void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "iteration,mean_logloss,std_logloss\r\n";
  for (const auto& p : curve) {
    out << p.iteration << ',' << format_double(p.mean_log10_loss) << ','
        << format_double(p.std_log10_loss) << "\r\n";
  }
}

/// Ranked summary, lowest mean error first.
inline void write_comparison_csv(std::ostream& out, const Comparison& c) {
  out << "rank,name,mean_error_m,std_error_m\r\n";
  for (std::size_t i = 0; i < c.ranking.size(); ++i) {
    const EvalReport& r = c.reports[c.ranking[i]];
    out << i + 1 << ',' << detail::quote_if_needed(r.name) << ',' << format_double(r.error.mean)
        << ',' << format_double(r.error.std) << "\r\n";
  }
}

inline Json summary_json(const EvalReport& r) {
  Json hashes = Json::array();
  for (const auto& rep : r.repetitions) hashes.push_back(hex64(rep.split_hash));
  Json confusion = Json::array();
  for (const auto& c : r.confusion) {
    confusion.push_back({{"true", c.truth}, {"predicted", c.predicted}, {"count", c.count}});
  }
  return {{"name", r.name},
          {"mean_error_m", r.error.mean},
          {"std_error_m", r.error.std},
          {"formatted", format_mean_std(r.error)},
          {"repetition_errors_m", r.repetition_errors()},
          {"split_hashes", hashes},
          {"top_confusions", confusion}};
}

inline Json summary_json(const Comparison& c) {
  Json reports = Json::array();
  for (const auto& r : c.reports) reports.push_back(summary_json(r));
  Json ranking = Json::array();
  for (auto i : c.ranking) ranking.push_back(c.reports[i].name);
  return {{"reports", reports}, {"ranking", ranking}};
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  writer(out);
  if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace augboost

#endif  // AUGBOOST_REPORT_HPP
