// Copyright 2026 The mapface Authors
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

// Batch front end: train, add-class, evaluate, recognize, inspect.
//
// Exit status: 0 on success, 2 on input errors, 3 on I/O errors.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mapface/error.hpp"
#include "mapface/io.hpp"
#include "mapface/log.hpp"
#include "mapface/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mapface;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Flags shared by every subcommand. Values stay as strings so they can be fed
/// through RunConfig::set after the config file, which keeps validation in one place.
struct SharedFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Key/value config file; flags override it");
    add(cmd, "--data", "data", "Dataset root (<root>/<label>/<images>)");
    add(cmd, "--out", "out", "Output directory");
    add(cmd, "--seed", "seed", "Split seed (u64)");
    add(cmd, "--k", "k", "Coefficients per channel (1..99)");
    add(cmd, "--color", "color", "gray | ycbcr");
    add(cmd, "--select", "select", "sort | mask");
    add(cmd, "--classifier", "classifier", "map | pca | lda");
    add(cmd, "--size", "size", "Canonical size WxH");
    add(cmd, "--train-per-class", "train_per_class", "Training images per class");
    add(cmd, "--train-ratio", "train_ratio", "Training fraction per class (overrides count)");
    add(cmd, "--dims", "dims", "PCA/LDA projection size");
    add(cmd, "--epsilon", "epsilon", "MAP ridge override");
    add(cmd, "--equalize-chroma", "equalize_chroma", "Also equalize Cb/Cr (true/false)");
    add(cmd, "--top", "top", "Labels printed by recognize");
    add(cmd, "--model", "model", "Model file path");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_file.empty()) cfg = RunConfig::from_file(config_file, cfg);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    if (cfg.k > 99) {
      log_warning("cli", "k = " + std::to_string(cfg.k) + " exceeds the recommended maximum of 99");
    }
    return cfg;
  }

 private:
  void add(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { overrides[key] = v; }, help);
  }
};

class RunLog {
 public:
  void line(const std::string& text) {
    std::cerr << text << '\n';
    buffer_ << text << '\n';
  }
  void save(const fs::path& path) const { write_file_atomic(path, buffer_.str(), "cli"); }

 private:
  std::ostringstream buffer_;
};

fs::path model_path(const RunConfig& cfg) {
  return cfg.model.empty() ? cfg.out / "model.mapf" : cfg.model;
}

TrainOptions train_options(const RunConfig& cfg) { return {cfg.classifier, cfg.dims, cfg.epsilon}; }

void describe_model(RunLog& log, const ModelFile& model) {
  log.line("classes: " + std::to_string(model.labels().size()) + ", k = " +
           std::to_string(model.extraction.k) + ", colour = " +
           std::string(to_string(model.extraction.color_mode)) + ", selection = " +
           std::string(to_string(model.extraction.selection)));
  if (const auto* map = std::get_if<MapModel>(&model.model)) {
    for (Channel ch : map->channels()) {
      log.line("epsilon[" + std::string(channel_name(ch)) + "] = " + format_number(map->epsilon(ch)));
    }
  }
}

int cmd_train(const RunConfig& cfg) {
  RunLog log;
  const auto start = Clock::now();
  const auto index = scan_dataset(cfg.data, cfg.split(), cfg.seed);
  const auto train = load_split(index, Split::train);
  for (const auto& cls : train) {
    log.line("class " + cls.label + ": " + std::to_string(cls.images.size()) + " training image(s)");
  }
  const auto model = train_model(train, cfg.extraction(), train_options(cfg));
  ensure_directory(cfg.out, "cli");
  const auto path = model_path(cfg);
  if (path.has_parent_path()) ensure_directory(path.parent_path(), "cli");
  save_model(model, path);
  describe_model(log, model);
  log.line("classifier = " + model.kind_name());
  log.line("train_seconds = " + format_number(seconds_since(start)));
  log.line("model written to " + path.string());
  log.save(cfg.out / "train.log");
  return 0;
}

int cmd_add_class(const RunConfig& cfg, const fs::path& class_dir, std::string label) {
  if (cfg.model.empty()) throw Error(Errc::InvalidArgument, "cli", "add-class needs --model");
  if (label.empty()) label = fs::path(class_dir).lexically_normal().filename().string();
  if (label.empty()) label = fs::path(class_dir).lexically_normal().parent_path().filename().string();
  RunLog log;
  const auto start = Clock::now();
  ModelFile model = load_model(cfg.model);
  const auto before = model.labels().size();
  const auto cls = load_class_dir(class_dir, label);
  add_class(model, cls);
  save_model(model, cfg.model);
  log.line("added class " + label + " from " + std::to_string(cls.images.size()) + " image(s)");
  log.line("existing classes: " + std::to_string(before) +
           ", none re-read; pooled scatter updated by the new class scatter only");
  describe_model(log, model);
  log.line("add_class_seconds = " + format_number(seconds_since(start)));
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  RunLog log;
  // Fail on an unusable output directory before doing any work.
  ensure_directory(cfg.out, "cli");
  const auto index = scan_dataset(cfg.data, cfg.split(), cfg.seed);
  EvaluationRun run;
  if (!cfg.model.empty()) {
    const auto model = load_model(cfg.model);
    log.line("evaluating stored " + model.kind_name() + " model " + cfg.model.string());
    run = evaluate_model(model, load_split(index, Split::test));
  } else {
    run = evaluate_pipeline(cfg.classifier, index, cfg);
  }
  write_reports(run, cfg, dataset_hash(index, cfg.data), cfg.out);
  log.line("rank1 = " + format_number(run.report.rank1));
  log.line("eer = " + (run.report.eer ? format_number(*run.report.eer) : std::string("n/a")));
  log.line("train_seconds = " + format_number(run.timing.train_seconds));
  log.line("query_seconds = " + format_number(run.timing.query_seconds) + " for " +
           std::to_string(run.timing.probes) + " probe(s)");
  if (run.timing.probes > 0) {
    log.line("per_probe_seconds = " +
             format_number(run.timing.query_seconds / static_cast<double>(run.timing.probes)));
  }
  log.save(cfg.out / "evaluate.log");
  return 0;
}

int cmd_recognize(const RunConfig& cfg, const fs::path& image) {
  if (cfg.model.empty()) throw Error(Errc::InvalidArgument, "cli", "recognize needs --model");
  const auto model = load_model(cfg.model);
  const auto probe = load_image(image);
  const auto start = Clock::now();
  const auto decision = recognize(model, probe);
  const double elapsed = seconds_since(start);

  std::vector<std::size_t> order(decision.scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return decision.scores[a] > decision.scores[b]; });
  const auto n = std::min(cfg.top, order.size());
  const auto& labels = model.labels();
  for (std::size_t r = 0; r < n; ++r) {
    std::cout << (r + 1) << '\t' << labels[order[r]] << '\t' << format_number(decision.scores[order[r]])
              << '\n';
  }
  std::cerr << "query_seconds = " << format_number(elapsed) << '\n';
  return 0;
}

int cmd_inspect(const RunConfig& cfg) {
  if (cfg.model.empty()) throw Error(Errc::InvalidArgument, "cli", "inspect needs --model");
  std::cout << export_model_tsv(load_model(cfg.model));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face recognition with a pooled-covariance MAP discriminant on DCT features"};
  app.require_subcommand(1);

  SharedFlags train_flags, add_flags, eval_flags, rec_flags, inspect_flags;
  auto* train = app.add_subcommand("train", "Train a model on the training split");
  train_flags.attach(train);

  auto* add = app.add_subcommand("add-class", "Enroll a new class without retraining");
  add_flags.attach(add);
  std::string class_dir;
  std::string label;
  add->add_option("--class-dir,class_dir", class_dir, "Directory holding the new class images")->required();
  add->add_option("--label", label, "Class label (default: directory name)");

  auto* evaluate = app.add_subcommand("evaluate", "Write cms.csv, roc.csv, decisions.csv and summary.txt");
  eval_flags.attach(evaluate);

  auto* rec = app.add_subcommand("recognize", "Rank enrolled classes for one probe image");
  rec_flags.attach(rec);
  std::string image;
  rec->add_option("--image,image", image, "Probe image")->required();

  auto* inspect = app.add_subcommand("inspect", "Dump a model as tab-separated text");
  inspect_flags.attach(inspect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(train_flags.resolve());
    if (*add) return cmd_add_class(add_flags.resolve(), class_dir, label);
    if (*evaluate) return cmd_evaluate(eval_flags.resolve());
    if (*rec) return cmd_recognize(rec_flags.resolve(), image);
    if (*inspect) return cmd_inspect(inspect_flags.resolve());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: [io] " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
