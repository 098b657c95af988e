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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapface/eval.hpp"
#include "mapface/ingest.hpp"
#include "mapface/model_io.hpp"

namespace mapface {

enum class ClassifierKind : std::uint8_t { map, pca, lda };

std::string_view to_string(ClassifierKind kind) noexcept;
std::string_view to_string(ColorMode mode) noexcept;
std::string_view to_string(SelectionMode mode) noexcept;

/// Every knob of a batch run. Serialized as flat "key = value" lines; unknown
/// keys are rejected so typos do not silently fall back to defaults.
struct RunConfig {
  std::filesystem::path data;
  std::filesystem::path out = "out";
  std::filesystem::path model;  // empty: evaluate trains from data
  std::uint64_t seed = 1;
  std::size_t train_per_class = 5;
  std::optional<double> train_ratio;  // overrides train_per_class when set
  int width = 128;
  int height = 128;
  ColorMode color = ColorMode::ycbcr;
  bool equalize_chroma = false;
  std::size_t k = 64;
  SelectionMode select = SelectionMode::per_image_sort;
  ClassifierKind classifier = ClassifierKind::map;
  std::optional<std::size_t> dims;     // baseline projection size
  std::optional<double> epsilon;       // MAP ridge override
  std::size_t top = 5;                 // recognize: labels printed

  /// Applies one key/value; throws InvalidArgument on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  std::string to_text() const;
  /// Values in text override those already in base.
  static RunConfig from_text(std::string_view text, RunConfig base);
  static RunConfig from_file(const std::filesystem::path& path, RunConfig base);

  SplitSpec split() const;
  ExtractionSpec extraction() const;

  bool operator==(const RunConfig&) const = default;
};

/// Decoded images of one class, with a display name per image.
struct LabeledImages {
  std::string label;
  std::vector<RgbImage> images;
  std::vector<std::string> names;
};

/// Loads the train or test images of every class of an index.
std::vector<LabeledImages> load_split(const DatasetIndex& index, Split which);

/// Loads every image of a single class directory.
LabeledImages load_class_dir(const std::filesystem::path& dir, const std::string& label);

struct TrainOptions {
  ClassifierKind classifier = ClassifierKind::map;
  std::optional<std::size_t> dims;
  std::optional<double> epsilon;
};

/// Fits masks (fixed_mask mode), extracts features and fits the classifier.
ModelFile train_model(std::span<const LabeledImages> classes, ExtractionSpec extraction,
                      const TrainOptions& options);

/// Enrolls a new class with the model's stored extraction settings. Only the
/// new images are read. PCA and LDA models throw Unsupported: they would need
/// the full training set to recompute their projection.
void add_class(ModelFile& model, const LabeledImages& cls);

Decision recognize(const ModelFile& model, const RgbImage& probe);

struct ProbeResult {
  std::string name;
  std::size_t truth = 0;
  std::size_t predicted = 0;
  double top_score = 0.0;
};

struct Timing {
  double train_seconds = 0.0;
  double query_seconds = 0.0;
  std::size_t probes = 0;
};

struct EvaluationRun {
  /// Built from Decision::similarity, so CMS matches the classifier's ranking
  /// and ROC compares genuine and impostor trials on one scale.
  ScoreMatrix scores;
  EvalReport report;
  std::vector<ProbeResult> probes;
  std::vector<std::string> labels;
  Timing timing;
};

/// Classifies every probe. Probe classes are matched to model classes by label;
/// a probe label the model does not know throws ConfigMismatch.
EvaluationRun evaluate_model(const ModelFile& model, std::span<const LabeledImages> probes);

/// Train on train, then evaluate on test; timing covers both phases.
EvaluationRun evaluate_images(std::span<const LabeledImages> train, std::span<const LabeledImages> test,
                              const ExtractionSpec& extraction, const TrainOptions& options);

/// Disk-backed variant: loads the index's splits and calls evaluate_images.
EvaluationRun evaluate_pipeline(ClassifierKind kind, const DatasetIndex& index, const RunConfig& config);

/// CRC32 over class labels, relative paths, split tags and file contents.
std::string dataset_hash(const DatasetIndex& index, const std::filesystem::path& root);

/// Writes cms.csv, roc.csv, decisions.csv and summary.txt into out_dir.
/// Every file is written atomically; only summary.txt carries run metadata.
void write_reports(const EvaluationRun& run, const RunConfig& config, std::string_view dataset_id,
                   const std::filesystem::path& out_dir);

}  // namespace mapface
