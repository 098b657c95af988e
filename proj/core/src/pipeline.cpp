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

#include "mapface/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mapface/error.hpp"
#include "mapface/io.hpp"
#include "mapface/log.hpp"

namespace mapface {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kModule = "cli";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(Errc::InvalidArgument, kModule,
              "bad value '" + std::string(value) + "' for " + std::string(key) + ": " + std::string(why));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) bad_value(key, value, "not a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "expected true or false");
}

std::vector<ClassSamples> to_samples(std::span<const LabeledImages> classes, const ExtractionSpec& spec) {
  const std::size_t n_chans = spec.color_mode == ColorMode::ycbcr ? 3 : 1;
  std::vector<ClassSamples> out;
  out.reserve(classes.size());
  for (const auto& cls : classes) {
    ClassSamples s;
    s.label = cls.label;
    s.per_channel.resize(n_chans);
    for (const auto& img : cls.images) {
      auto feats = extract_features(img, spec);
      for (std::size_t slot = 0; slot < n_chans; ++slot) {
        s.per_channel[slot].push_back(std::move(feats[slot].values));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::map: return "map";
    case ClassifierKind::pca: return "pca";
    case ClassifierKind::lda: return "lda";
  }
  return "?";
}

std::string_view to_string(ColorMode mode) noexcept {
  return mode == ColorMode::ycbcr ? "ycbcr" : "gray";
}

std::string_view to_string(SelectionMode mode) noexcept {
  return mode == SelectionMode::fixed_mask ? "mask" : "sort";
}

void RunConfig::set(std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  if (key == "data") {
    data = std::string(value);
  } else if (key == "out") {
    out = std::string(value);
  } else if (key == "model") {
    model = std::string(value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "train_per_class" || key == "train-per-class") {
    train_per_class = parse_number<std::size_t>(key, value);
    if (train_per_class < 1) bad_value(key, value, "must be at least 1");
  } else if (key == "train_ratio") {
    if (value == "none" || value.empty()) {
      train_ratio.reset();
    } else {
      const double r = parse_number<double>(key, value);
      if (!(r > 0.0 && r < 1.0)) bad_value(key, value, "must lie in (0, 1)");
      train_ratio = r;
    }
  } else if (key == "size") {
    const auto x = value.find('x');
    if (x == std::string_view::npos) bad_value(key, value, "expected WxH");
    const int w = parse_number<int>(key, value.substr(0, x));
    const int h = parse_number<int>(key, value.substr(x + 1));
    if (w < 1 || h < 1) bad_value(key, value, "dimensions must be positive");
    width = w;
    height = h;
  } else if (key == "color") {
    if (value == "gray" || value == "grayscale") {
      color = ColorMode::grayscale;
    } else if (value == "ycbcr") {
      color = ColorMode::ycbcr;
    } else {
      bad_value(key, value, "expected gray or ycbcr");
    }
  } else if (key == "equalize_chroma" || key == "equalize-chroma") {
    equalize_chroma = parse_bool(key, value);
  } else if (key == "k") {
    k = parse_number<std::size_t>(key, value);
    if (k < 1) bad_value(key, value, "must be at least 1");
  } else if (key == "select") {
    if (value == "sort") {
      select = SelectionMode::per_image_sort;
    } else if (value == "mask") {
      select = SelectionMode::fixed_mask;
    } else {
      bad_value(key, value, "expected sort or mask");
    }
  } else if (key == "classifier") {
    if (value == "map") {
      classifier = ClassifierKind::map;
    } else if (value == "pca") {
      classifier = ClassifierKind::pca;
    } else if (value == "lda") {
      classifier = ClassifierKind::lda;
    } else {
      bad_value(key, value, "expected map, pca or lda");
    }
  } else if (key == "dims") {
    if (value == "auto" || value.empty()) {
      dims.reset();
    } else {
      dims = parse_number<std::size_t>(key, value);
      if (*dims < 1) bad_value(key, value, "must be at least 1");
    }
  } else if (key == "epsilon") {
    if (value == "auto" || value.empty()) {
      epsilon.reset();
    } else {
      const double e = parse_number<double>(key, value);
      if (!(e > 0.0)) bad_value(key, value, "must be positive");
      epsilon = e;
    }
  } else if (key == "top") {
    top = parse_number<std::size_t>(key, value);
    if (top < 1) bad_value(key, value, "must be at least 1");
  } else {
    throw Error(Errc::InvalidArgument, kModule, "unknown config key '" + std::string(key) + "'");
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "data = " << data.string() << '\n';
  os << "out = " << out.string() << '\n';
  os << "model = " << model.string() << '\n';
  os << "seed = " << seed << '\n';
  os << "train_per_class = " << train_per_class << '\n';
  os << "train_ratio = " << (train_ratio ? format_number(*train_ratio) : "none") << '\n';
  os << "size = " << width << 'x' << height << '\n';
  os << "color = " << to_string(color) << '\n';
  os << "equalize_chroma = " << (equalize_chroma ? "true" : "false") << '\n';
  os << "k = " << k << '\n';
  os << "select = " << to_string(select) << '\n';
  os << "classifier = " << to_string(classifier) << '\n';
  os << "dims = " << (dims ? std::to_string(*dims) : "auto") << '\n';
  os << "epsilon = " << (epsilon ? format_number(*epsilon) : "auto") << '\n';
  os << "top = " << top << '\n';
  return os.str();
}

RunConfig RunConfig::from_text(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidArgument, kModule,
                  "config line " + std::to_string(line_no) + " has no '='");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig RunConfig::from_file(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, kModule, "cannot read config " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return from_text(text, std::move(base));
}

SplitSpec RunConfig::split() const {
  return train_ratio ? SplitSpec::ratio(*train_ratio) : SplitSpec::per_class(train_per_class);
}

ExtractionSpec RunConfig::extraction() const {
  ExtractionSpec s;
  s.width = width;
  s.height = height;
  s.color_mode = color;
  s.equalize_chroma = equalize_chroma;
  s.k = k;
  s.selection = select;
  return s;
}

std::vector<LabeledImages> load_split(const DatasetIndex& index, Split which) {
  std::vector<LabeledImages> out;
  for (const auto& cls : index.classes) {
    LabeledImages li;
    li.label = cls.label;
    for (const auto& p : cls.paths(which)) {
      li.images.push_back(load_image(p));
      li.names.push_back(p.string());
    }
    out.push_back(std::move(li));
  }
  return out;
}

LabeledImages load_class_dir(const fs::path& dir, const std::string& label) {
  LabeledImages li;
  li.label = label;
  for (const auto& p : list_images(dir)) {
    li.images.push_back(load_image(p));
    li.names.push_back(p.string());
  }
  if (li.images.empty()) {
    throw Error(Errc::ClassTooSmall, "ingest", "class directory " + dir.string() + " holds no images");
  }
  return li;
}

ModelFile train_model(std::span<const LabeledImages> classes, ExtractionSpec extraction,
                      const TrainOptions& options) {
  if (classes.empty()) throw Error(Errc::EmptyDataset, "ingest", "no training classes");
  if (extraction.selection == SelectionMode::fixed_mask) {
    std::vector<RgbImage> all;
    for (const auto& cls : classes) all.insert(all.end(), cls.images.begin(), cls.images.end());
    fit_masks(extraction, all);
  } else {
    extraction.masks.clear();
  }
  const auto samples = to_samples(classes, extraction);
  switch (options.classifier) {
    case ClassifierKind::map:
      return {extraction, MapModel::train(samples, extraction.color_mode, options.epsilon)};
    case ClassifierKind::pca:
      return {extraction, BaselineModel::fit(BaselineKind::pca, samples, extraction.color_mode, options.dims)};
    case ClassifierKind::lda:
      return {extraction, BaselineModel::fit(BaselineKind::lda, samples, extraction.color_mode, options.dims)};
  }
  throw Error(Errc::InvalidArgument, kModule, "unknown classifier");
}

void add_class(ModelFile& model, const LabeledImages& cls) {
  auto* map = std::get_if<MapModel>(&model.model);
  if (map == nullptr) {
    throw Error(Errc::Unsupported, "classify",
                model.kind_name() + " models must be retrained to add a class");
  }
  const LabeledImages one[] = {cls};
  const auto samples = to_samples(one, model.extraction);
  map->add_class(samples.front());
}

Decision recognize(const ModelFile& model, const RgbImage& probe) {
  return model.classify(extract_features(probe, model.extraction));
}

EvaluationRun evaluate_model(const ModelFile& model, std::span<const LabeledImages> probes) {
  const auto& labels = model.labels();
  EvaluationRun run;
  run.labels = labels;
  std::size_t total = 0;
  for (const auto& cls : probes) total += cls.images.size();
  run.scores.scores.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(labels.size()));

  const auto start = Clock::now();
  Eigen::Index row = 0;
  for (const auto& cls : probes) {
    const auto it = std::find(labels.begin(), labels.end(), cls.label);
    if (it == labels.end() && !cls.images.empty()) {
      throw Error(Errc::ConfigMismatch, "eval", "probe class '" + cls.label + "' is not enrolled");
    }
    const auto truth = static_cast<std::size_t>(it - labels.begin());
    for (std::size_t j = 0; j < cls.images.size(); ++j) {
      const auto d = recognize(model, cls.images[j]);
      for (std::size_t i = 0; i < d.similarity.size(); ++i) {
        run.scores.scores(row, static_cast<Eigen::Index>(i)) = d.similarity[i];
      }
      run.scores.truth.push_back(truth);
      ProbeResult pr;
      pr.name = j < cls.names.size() ? cls.names[j] : cls.label + "#" + std::to_string(j);
      pr.truth = truth;
      pr.predicted = d.class_index;
      pr.top_score = d.similarity[d.class_index];
      run.probes.push_back(std::move(pr));
      ++row;
    }
  }
  run.timing.query_seconds = seconds_since(start);
  run.timing.probes = total;
  run.report = make_report(run.scores);
  if (!run.report.eer) log_warning("eval", "single enrolled class: ROC and EER are undefined (NoImpostors)");
  return run;
}

EvaluationRun evaluate_images(std::span<const LabeledImages> train, std::span<const LabeledImages> test,
                              const ExtractionSpec& extraction, const TrainOptions& options) {
  const auto start = Clock::now();
  const ModelFile model = train_model(train, extraction, options);
  const double train_seconds = seconds_since(start);
  EvaluationRun run = evaluate_model(model, test);
  run.timing.train_seconds = train_seconds;
  return run;
}

EvaluationRun evaluate_pipeline(ClassifierKind kind, const DatasetIndex& index, const RunConfig& config) {
  const auto train = load_split(index, Split::train);
  const auto test = load_split(index, Split::test);
  if (index.count(Split::test) == 0) throw Error(Errc::EmptyDataset, "eval", "test split is empty");
  return evaluate_images(train, test, config.extraction(), {kind, config.dims, config.epsilon});
}

std::string dataset_hash(const DatasetIndex& index, const fs::path& root) {
  std::vector<std::uint8_t> buf;
  auto add = [&](std::string_view s) {
    buf.insert(buf.end(), s.begin(), s.end());
    buf.push_back(0);
  };
  for (const auto& cls : index.classes) {
    add(cls.label);
    for (const auto& e : cls.images) {
      add(fs::relative(e.path, root).generic_string());
      add(e.split == Split::train ? "train" : "test");
      std::ifstream in(e.path, std::ios::binary);
      buf.insert(buf.end(), std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
  }
  char hex[9];
  std::snprintf(hex, sizeof(hex), "%08x", crc32(buf));
  return hex;
}

void write_reports(const EvaluationRun& run, const RunConfig& config, std::string_view dataset_id,
                   const fs::path& out_dir) {
  ensure_directory(out_dir, "eval");
  write_file_atomic(out_dir / "cms.csv", cms_csv(run.report.cms), "eval");
  write_file_atomic(out_dir / "roc.csv", roc_csv(run.report.roc), "eval");

  std::string decisions = "probe,truth,predicted,score\n";
  for (const auto& p : run.probes) {
    decisions += p.name + ',' + run.labels[p.truth] + ',' + run.labels[p.predicted] + ',' +
                 format_number(p.top_score) + '\n';
  }
  write_file_atomic(out_dir / "decisions.csv", decisions, "eval");

  std::ostringstream os;
  os << "rank1 = " << format_number(run.report.rank1) << '\n';
  os << "eer = " << (run.report.eer ? format_number(*run.report.eer) : "n/a") << '\n';
  os << "probes = " << run.scores.probes() << '\n';
  os << "classes = " << run.scores.classes() << '\n';
  os << "dataset_hash = " << dataset_id << '\n';
  os << "# effective configuration\n" << config.to_text();
  write_file_atomic(out_dir / "summary.txt", os.str(), "eval");
}

}  // namespace mapface
