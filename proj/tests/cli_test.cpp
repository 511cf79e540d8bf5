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

#include <gtest/gtest.h>

#include <algorithm>

#include "augboost/dataset.hpp"
#include "cli_runner.hpp"

namespace augboost {
namespace {

using testing::RunResult;
using testing::Scratch;
using testing::read_file;
using testing::write_text;
namespace fs = std::filesystem;

constexpr const char* kSmallConfig = R"({
  "seed": 5,
  "trajectory": {"steps": 200, "visited_cells": 10},
  "mlp": {"adam": {"learning_rate": 0.01}, "max_epochs": 3},
  "boost": {"T": 6, "c_BA": 3, "tree": {"min_samples_leaf": 5, "min_samples_split": 10}},
  "split": {"repetitions": 2}
})";

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(CliTest, SynthDefaultShape) {
  Scratch dir("synth");
  RunResult r = dir.run("synth --out '" + (dir / "d.csv").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("N=1090 m=10 classes=54"), std::string::npos) << r.out;
  FingerprintDataset ds = load_csv((dir / "d.csv").string(), default_grid());
  EXPECT_EQ(ds.size(), 1090u);
  EXPECT_EQ(ds.num_beacons(), 10u);
  EXPECT_EQ(ds.distinct_labels().size(), 54u);
}

TEST(CliTest, SynthIsReproducibleAndSeedSensitive) {
  Scratch dir("repeat");
  ASSERT_EQ(dir.run("synth --seed 3 --out '" + (dir / "a.csv").string() + "'").exit_code, 0);
  ASSERT_EQ(dir.run("synth --seed 3 --out '" + (dir / "b.csv").string() + "'").exit_code, 0);
  ASSERT_EQ(dir.run("synth --seed 4 --out '" + (dir / "c.csv").string() + "'").exit_code, 0);
  EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
  EXPECT_NE(read_file(dir / "a.csv"), read_file(dir / "c.csv"));
}

TEST(CliTest, TrainEvalPredictPipeline) {
  Scratch dir("pipeline");
  write_text(dir / "cfg.json", kSmallConfig);
  const std::string cfg = " --config '" + (dir / "cfg.json").string() + "'";
  const std::string data = (dir / "d.csv").string();
  ASSERT_EQ(dir.run("synth" + cfg + " --out '" + data + "'").exit_code, 0);

  RunResult train = dir.run("train" + cfg + " --data '" + data + "' --out '" +
                            (dir / "m.json").string() + "' --verbose");
  ASSERT_EQ(train.exit_code, 0) << train.err;
  EXPECT_EQ(count_lines(train.out), 7u);  // six stage lines and a summary

  RunResult eval = dir.run("eval" + cfg + " --data '" + data + "' --out '" +
                           (dir / "eval").string() + "'");
  ASSERT_EQ(eval.exit_code, 0) << eval.err;
  EXPECT_NE(eval.out.find(" m"), std::string::npos);
  EXPECT_EQ(count_lines(read_file(dir / "eval" / "repetitions.csv")), 3u);
  EXPECT_EQ(count_lines(read_file(dir / "eval" / "curve.csv")), 7u);

  RunResult pred = dir.run("predict" + cfg + " --data '" + data + "' --model '" +
                           (dir / "m.json").string() + "'");
  ASSERT_EQ(pred.exit_code, 0) << pred.err;
  EXPECT_EQ(pred.out.rfind("index,label,x,y\r\n", 0), 0u);
  EXPECT_EQ(count_lines(pred.out), 201u);
}

TEST(CliTest, CompareAndCurve) {
  Scratch dir("compare");
  write_text(dir / "cfg.json", kSmallConfig);
  const std::string cfg = " --config '" + (dir / "cfg.json").string() + "'";
  const std::string data = (dir / "d.csv").string();
  ASSERT_EQ(dir.run("synth" + cfg + " --out '" + data + "'").exit_code, 0);
  RunResult cmp = dir.run("compare" + cfg + " --data '" + data + "' --out '" +
                          (dir / "cmp").string() + "'");
  ASSERT_EQ(cmp.exit_code, 0) << cmp.err;
  EXPECT_EQ(count_lines(read_file(dir / "cmp" / "compare.csv")), 4u);
  EXPECT_TRUE(fs::exists(dir / "cmp" / "rp_repetitions.csv"));
  RunResult curve = dir.run("curve" + cfg + " --data '" + data + "' --out '" +
                            (dir / "curve.csv").string() + "'");
  ASSERT_EQ(curve.exit_code, 0) << curve.err;
  std::string text = read_file(dir / "curve.csv");
  EXPECT_EQ(text.rfind("iteration,mean_logloss,std_logloss\r\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 7u);
}

TEST(CliTest, PredictRejectsBeaconMismatchAndHandlesEmptyInput) {
  Scratch dir("predict");
  write_text(dir / "cfg.json", kSmallConfig);
  const std::string cfg = " --config '" + (dir / "cfg.json").string() + "'";
  const std::string data = (dir / "d.csv").string();
  ASSERT_EQ(dir.run("synth" + cfg + " --out '" + data + "'").exit_code, 0);
  const std::string model = (dir / "m.json").string();
  ASSERT_EQ(dir.run("train" + cfg + " --data '" + data + "' --out '" + model + "'").exit_code, 0);

  write_text(dir / "narrow.csv", "b1,b2,b3,label\r\n-50,-60,-70,0\r\n");
  RunResult bad = dir.run("predict" + cfg + " --data '" + (dir / "narrow.csv").string() +
                          "' --model '" + model + "'");
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.err.find("model expects 10"), std::string::npos) << bad.err;

  write_text(dir / "empty.csv", "b1,b2,b3,b4,b5,b6,b7,b8,b9,b10,label\r\n");
  RunResult empty = dir.run("predict" + cfg + " --data '" + (dir / "empty.csv").string() +
                            "' --model '" + model + "'");
  ASSERT_EQ(empty.exit_code, 0) << empty.err;
  EXPECT_EQ(empty.out, "index,label,x,y\r\n");
}

TEST(CliTest, ExitCodes) {
  Scratch dir("exit");
  EXPECT_EQ(dir.run("").exit_code, 1);
  EXPECT_EQ(dir.run("frobnicate").exit_code, 1);
  EXPECT_EQ(dir.run("synth").exit_code, 1);  // --out is required
  EXPECT_EQ(dir.run("train --out x.json").exit_code, 1);
  EXPECT_EQ(dir.run("--help").exit_code, 0);

  write_text(dir / "j.json", R"({"beacons": [[1, 1], [2, 2]], "boost": {"J": 3}})");
  RunResult j = dir.run("synth --config '" + (dir / "j.json").string() + "' --out '" +
                        (dir / "d.csv").string() + "'");
  EXPECT_EQ(j.exit_code, 2);
  EXPECT_NE(j.err.find("exceeds"), std::string::npos) << j.err;

  write_text(dir / "unknown.json", R"({"bost": {}})");
  EXPECT_EQ(dir.run("synth --config '" + (dir / "unknown.json").string() + "' --out '" +
                    (dir / "d.csv").string() + "'")
                .exit_code,
            2);
  EXPECT_EQ(dir.run("train --data '" + (dir / "missing.csv").string() + "' --out '" +
                    (dir / "m.json").string() + "'")
                .exit_code,
            2);

  write_text(dir / "bad.csv", "b1,b2,label\r\n-50,-60,0\r\n-50,1\r\n");
  RunResult row = dir.run("train --data '" + (dir / "bad.csv").string() + "' --out '" +
                          (dir / "m.json").string() + "'");
  EXPECT_EQ(row.exit_code, 2);
  EXPECT_NE(row.err.find("row 2"), std::string::npos) << row.err;
}

TEST(CliTest, DivergentTrainingExitsWithThree) {
  Scratch dir("diverge");
  write_text(dir / "cfg.json", R"({
    "trajectory": {"steps": 100, "visited_cells": 5},
    "mlp": {"adam": {"learning_rate": 1e300}, "max_epochs": 2},
    "boost": {"T": 1, "tree": {"min_samples_leaf": 2, "min_samples_split": 4}}
  })");
  const std::string cfg = " --config '" + (dir / "cfg.json").string() + "'";
  const std::string data = (dir / "d.csv").string();
  ASSERT_EQ(dir.run("synth" + cfg + " --out '" + data + "'").exit_code, 0);
  RunResult r = dir.run("train" + cfg + " --data '" + data + "' --out '" +
                        (dir / "m.json").string() + "'");
  EXPECT_EQ(r.exit_code, 3) << r.err;
  EXPECT_NE(r.err.find("stage 1"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace augboost
