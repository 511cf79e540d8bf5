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

// augboost: synthesize fingerprint data, train, evaluate, compare and
// predict. Exit status: 0 success, 1 usage error, 2 data error, 3 training
// failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "augboost/augboost.hpp"

namespace {

using namespace augboost;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

struct CommonFlags {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig c = f.config.empty() ? run_config_from_json(Json::object(), f.seed)
                                 : load_run_config(f.config, f.seed);
  if (!f.data.empty()) c.data = f.data;
  if (!f.out.empty()) c.out = f.out;
  return c;
}

const std::string& require_path(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing ") + flag);
  return path;
}

FingerprintDataset load_dataset(const RunConfig& c) {
  return impute_missing(load_csv(require_path(c.data, "--data"), c.grid), c.impute_floor);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_synth(const CommonFlags& f) {
  RunConfig c = resolve_config(f);
  const std::string& out = require_path(c.out, "--out");
  std::vector<std::string> warnings;
  FingerprintDataset ds = synthesize(c, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  save_csv(out, ds);
  std::cout << "N=" << ds.size() << " m=" << ds.num_beacons()
            << " classes=" << ds.distinct_labels().size() << "\n";
  return 0;
}

int cmd_train(const CommonFlags& f) {
  RunConfig c = resolve_config(f);
  const std::string& out = require_path(c.out, "--out");
  FingerprintDataset ds = load_dataset(c);
  StageCallback verbose;
  if (f.verbose) {
    verbose = [](int t, double loss) {
      std::cout << "stage " << t << " training_loss " << format_double(loss) << "\n";
    };
  }
  BoostModel model = fit(ds, c.boost, verbose);
  save_model(out, model);
  std::cout << "trained " << model.stages.size() << " stages, " << model.augmenters.size()
            << " augmenter fits, " << model.num_classes() << " classes; final training loss "
            << format_double(model.training_loss.back()) << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& f) {
  RunConfig c = resolve_config(f);
  const std::string& dir = require_path(c.out, "--out");
  FingerprintDataset ds = load_dataset(c);
  RepetitionCallback progress;
  if (f.verbose) {
    progress = [](int r, const RepetitionResult& rep) {
      std::cout << "repetition " << r + 1 << " mean_error_m " << format_double(rep.mean_error)
                << "\n";
    };
  }
  EvalReport report = evaluate(ds, c.grid, c.boost, c.split, progress);
  ensure_dir(dir);
  write_file(join(dir, "repetitions.csv"), [&](std::ostream& o) { write_repetitions_csv(o, report); });
  if (!report.curve.empty()) {
    write_file(join(dir, "curve.csv"), [&](std::ostream& o) { write_curve_csv(o, report.curve); });
  }
  Json summary = summary_json(report);
  summary["config"] = to_json(c);
  write_file(join(dir, "summary.json"), [&](std::ostream& o) { o << summary.dump(2) << "\n"; });
  std::cout << report.name << ": " << format_mean_std(report.error) << "\n";
  return 0;
}

int cmd_compare(const CommonFlags& f) {
  RunConfig c = resolve_config(f);
  const std::string& dir = require_path(c.out, "--out");
  FingerprintDataset ds = load_dataset(c);
  std::vector<NamedConfig> configs;
  for (const auto& name : c.compare) {
    BoostConfig b = c.boost;
    b.augment.kind = parse_augmenter_kind(name);
    configs.push_back({name, b});
  }
  Comparison cmp = compare(ds, c.grid, configs, c.split);
  ensure_dir(dir);
  write_file(join(dir, "compare.csv"), [&](std::ostream& o) { write_comparison_csv(o, cmp); });
  for (const auto& r : cmp.reports) {
    write_file(join(dir, r.name + "_repetitions.csv"),
               [&](std::ostream& o) { write_repetitions_csv(o, r); });
  }
  Json summary = summary_json(cmp);
  summary["config"] = to_json(c);
  write_file(join(dir, "summary.json"), [&](std::ostream& o) { o << summary.dump(2) << "\n"; });
  for (std::size_t i = 0; i < cmp.ranking.size(); ++i) {
    const EvalReport& r = cmp.reports[cmp.ranking[i]];
    std::cout << i + 1 << ". " << r.name << ": " << format_mean_std(r.error) << "\n";
  }
  return 0;
}

int cmd_curve(const CommonFlags& f) {
  RunConfig c = resolve_config(f);
  const std::string& out = require_path(c.out, "--out");
  FingerprintDataset ds = load_dataset(c);
  auto curve = learning_curve(ds, c.grid, c.boost, c.split);
  write_file(out, [&](std::ostream& o) { write_curve_csv(o, curve); });
  std::cout << "wrote " << curve.size() << " iterations; log10 loss "
            << format_double(curve.front().mean_log10_loss) << " -> "
            << format_double(curve.back().mean_log10_loss) << "\n";
  return 0;
}

int cmd_predict(const CommonFlags& f, const std::string& model_path) {
  RunConfig c = resolve_config(f);
  BoostModel model = load_model(require_path(model_path, "--model"));
  FingerprintDataset ds = load_dataset(c);
  if (ds.num_beacons() != model.num_features) {
    throw ValidationError("data has " + std::to_string(ds.num_beacons()) +
                          " beacon columns but the model expects " +
                          std::to_string(model.num_features));
  }
  std::vector<CellId> labels =
      ds.size() == 0 ? std::vector<CellId>{} : predict_label(model, ds.rssi);
  auto emit = [&](std::ostream& o) {
    o << "index,label,x,y\r\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      Point p = c.grid.center(labels[i]);
      o << i << ',' << labels[i] << ',' << format_double(p.x) << ',' << format_double(p.y)
        << "\r\n";
    }
  };
  if (c.out.empty()) {
    emit(std::cout);
  } else {
    write_file(c.out, emit);
  }
  return 0;
}

void add_common(CLI::App* sub, CommonFlags& f, bool data, bool verbose) {
  sub->add_option("--config", f.config, "JSON run configuration (defaults apply when omitted)");
  if (data) sub->add_option("--data", f.data, "input dataset CSV (b1,...,bm,label)");
  sub->add_option("--out", f.out, "output path or directory");
  sub->add_option("--seed", f.seed, "root seed; overrides every seed in the config");
  if (verbose) sub->add_flag("--verbose", f.verbose, "print per-stage / per-repetition progress");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augboost: gradient boosting with step-wise feature augmentation for RSSI "
               "fingerprint localization"};
  app.require_subcommand(1);
  app.footer("Default configuration (all keys optional; unknown keys are rejected):\n" +
             to_json(run_config_from_json(Json::object())).dump(2));

  CommonFlags f;
  std::string model_path;
  auto* synth = app.add_subcommand("synth", "write a synthetic fingerprint dataset");
  add_common(synth, f, false, false);
  auto* train = app.add_subcommand("train", "train a model and write it as JSON");
  add_common(train, f, true, true);
  auto* eval = app.add_subcommand("eval", "repeated hold-out evaluation");
  add_common(eval, f, true, true);
  auto* cmp = app.add_subcommand("compare", "paired comparison of augmenter kinds");
  add_common(cmp, f, true, false);
  auto* curve = app.add_subcommand("curve", "held-out log-loss learning curve CSV");
  add_common(curve, f, true, false);
  auto* predict = app.add_subcommand("predict", "predict cells and coordinates");
  add_common(predict, f, true, false);
  predict->add_option("--model", model_path, "model JSON written by 'train'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(f);
    if (train->parsed()) return cmd_train(f);
    if (eval->parsed()) return cmd_eval(f);
    if (cmp->parsed()) return cmd_compare(f);
    if (curve->parsed()) return cmd_curve(f);
    if (predict->parsed()) return cmd_predict(f, model_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    std::cerr << "training failed: " << e.what() << "\n";
    return kExitTraining;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
