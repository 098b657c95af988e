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


#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mapface/log.hpp"
#include "mapface/pipeline.hpp"
#include "mapface/synthetic.hpp"
#include "support/errors.hpp"
#include "support/temp_dir.hpp"

namespace mapface {
namespace {

using testing::code_of;
using testing::read_bytes;
using testing::TempDir;

SyntheticSpec small_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.classes = 5;
  s.images_per_class = 6;
  s.width = 16;
  s.height = 16;
  s.seed = seed;
  return s;
}

ExtractionSpec extraction(ColorMode color, std::size_t k = 12, int size = 16) {
  ExtractionSpec e;
  e.width = size;
  e.height = size;
  e.k = k;
  e.color_mode = color;
  return e;
}

TEST(RunConfig, TextRoundTrip) {
  RunConfig c;
  c.data = "/data/faces";
  c.seed = 99;
  c.train_ratio = 0.25;
  c.width = 64;
  c.height = 48;
  c.color = ColorMode::grayscale;
  c.equalize_chroma = true;
  c.k = 17;
  c.select = SelectionMode::fixed_mask;
  c.classifier = ClassifierKind::lda;
  c.dims = 3;
  c.epsilon = 0.125;
  c.top = 2;
  EXPECT_EQ(RunConfig::from_text(c.to_text(), {}), c);
  EXPECT_EQ(RunConfig::from_text(RunConfig{}.to_text(), c), RunConfig{});
}

TEST(RunConfig, TextOverridesBaseAndSkipsComments) {
  RunConfig base;
  base.k = 40;
  const auto c = RunConfig::from_text("# experiment\n\n  select = mask\nsize=32x24\n", base);
  EXPECT_EQ(c.k, 40u);
  EXPECT_EQ(c.select, SelectionMode::fixed_mask);
  EXPECT_EQ(c.width, 32);
  EXPECT_EQ(c.height, 24);
}

TEST(RunConfig, RejectsBadInput) {
  RunConfig c;
  EXPECT_EQ(code_of([&] { c.set("colour", "gray"); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { c.set("color", "rgb"); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { c.set("size", "64"); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { c.set("k", "ten"); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { c.set("train_ratio", "1.5"); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([] { RunConfig::from_text("k 5\n", {}); }), Errc::InvalidArgument);
  TempDir tmp;
  EXPECT_EQ(code_of([&] { RunConfig::from_file(tmp / "none.cfg", {}); }), Errc::IoFailure);
}

TEST(RunConfig, ExtractionMirrorsFields) {
  RunConfig c;
  c.set("size", "40x30");
  c.set("color", "gray");
  c.set("k", "9");
  c.set("select", "mask");
  const auto e = c.extraction();
  EXPECT_EQ(e.width, 40);
  EXPECT_EQ(e.height, 30);
  EXPECT_EQ(e.color_mode, ColorMode::grayscale);
  EXPECT_EQ(e.k, 9u);
  EXPECT_EQ(e.selection, SelectionMode::fixed_mask);
}

TEST(Pipeline, ResubstitutionIsPerfect) {
  auto spec = small_spec(2);
  spec.pixel_noise = 2.0;
  spec.pose = 0.5;
  spec.lighting = 2.0;
  spec.signal = 80.0;
  spec.luma_share = 0.7;
  spec.chroma_share = 0.3;
  const auto all = generate_faces(spec);
  for (auto colour : {ColorMode::grayscale, ColorMode::ycbcr}) {
    for (auto select : {SelectionMode::per_image_sort, SelectionMode::fixed_mask}) {
      auto e = extraction(colour);
      e.selection = select;
      const auto run = evaluate_images(all, all, e, {});
      EXPECT_DOUBLE_EQ(run.report.rank1, 1.0) << to_string(colour) << " " << to_string(select);
    }
  }
}

TEST(Pipeline, SingleClassDataset) {
  auto spec = small_spec(3);
  spec.classes = 1;
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(spec), 3, train, test);
  std::vector<std::string> warnings;
  set_log_sink([&](LogLevel level, std::string_view, std::string_view msg) {
    if (level == LogLevel::warning) warnings.emplace_back(msg);
  });
  const auto run = evaluate_images(train, test, extraction(ColorMode::grayscale), {});
  set_log_sink(nullptr);
  EXPECT_EQ(run.report.cms, std::vector<double>{1.0});
  EXPECT_FALSE(run.report.eer.has_value());
  EXPECT_EQ(code_of([&] { roc_eer(run.scores); }), Errc::NoImpostors);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Pipeline, AddClassMatchesBatchTraining) {
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(small_spec(4)), 3, train, test);
  for (auto color : {ColorMode::grayscale, ColorMode::ycbcr}) {
    const auto batch = train_model(train, extraction(color), {});
    const std::vector<LabeledImages> first(train.begin(), train.end() - 2);
    auto inc = train_model(first, extraction(color), {});
    add_class(inc, train[train.size() - 2]);
    add_class(inc, train.back());
    EXPECT_EQ(inc.labels(), batch.labels());
    for (const auto& cls : test) {
      for (const auto& img : cls.images) {
        EXPECT_EQ(recognize(inc, img).class_index, recognize(batch, img).class_index);
      }
    }
    EXPECT_EQ(code_of([&] { add_class(inc, train.front()); }), Errc::DuplicateLabel);
  }
}

TEST(Pipeline, BaselinesRefuseAddClass) {
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(small_spec(5)), 3, train, test);
  auto pca = train_model(train, extraction(ColorMode::grayscale), {.classifier = ClassifierKind::pca});
  LabeledImages extra{"new", {test[0].images[0]}, {"x"}};
  EXPECT_EQ(code_of([&] { add_class(pca, extra); }), Errc::Unsupported);
}

TEST(Pipeline, AddClassResizesForeignImages) {
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(small_spec(6)), 3, train, test);
  auto model = train_model(train, extraction(ColorMode::ycbcr), {});
  auto big = small_spec(7);
  big.width = 40;
  big.height = 28;
  big.classes = 1;
  auto foreign = generate_faces(big).front();
  foreign.label = "zzz";
  add_class(model, foreign);
  EXPECT_EQ(model.labels().back(), "zzz");
  EXPECT_EQ(recognize(model, foreign.images[0]).scores.size(), 6u);
}

TEST(Pipeline, GrayProbeIntoColourModel) {
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(small_spec(8)), 3, train, test);
  const auto model = train_model(train, extraction(ColorMode::ycbcr), {});
  const RgbImage gray = RgbImage::from_gray(test[1].images[0].g);
  const auto d = recognize(model, gray);
  EXPECT_EQ(d.scores.size(), 5u);
  for (double s : d.scores) EXPECT_TRUE(std::isfinite(s));
}

TEST(Pipeline, UnknownProbeLabel) {
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(small_spec(9)), 3, train, test);
  const auto model = train_model(train, extraction(ColorMode::grayscale), {});
  test[0].label = "stranger";
  EXPECT_EQ(code_of([&] { evaluate_model(model, test); }), Errc::ConfigMismatch);
}

TEST(Pipeline, ColourHelpsOnChromaCodedFaces) {
  SyntheticSpec spec;  // 20 classes x 10 images, 32 x 32
  spec.seed = 11;
  std::vector<LabeledImages> train, test;
  split_generated(generate_faces(spec), 5, train, test);
  const auto gray = evaluate_images(train, test, extraction(ColorMode::grayscale, 16, 32), {});
  const auto colour = evaluate_images(train, test, extraction(ColorMode::ycbcr, 16, 32), {});
  EXPECT_GE(colour.report.rank1, gray.report.rank1);
}

TEST(Pipeline, DatasetOnDiskEndToEnd) {
  TempDir tmp;
  write_dataset(generate_faces(small_spec(10)), tmp / "data");
  RunConfig config;
  config.data = tmp / "data";
  config.train_per_class = 3;
  config.width = 16;
  config.height = 16;
  config.k = 12;
  const auto index = scan_dataset(config.data, config.split(), config.seed);
  EXPECT_EQ(index.count(Split::test), 15u);
  const auto run = evaluate_pipeline(ClassifierKind::map, index, config);
  EXPECT_EQ(run.scores.probes(), 15u);

  const auto hash = dataset_hash(index, config.data);
  EXPECT_EQ(hash.size(), 8u);
  EXPECT_EQ(hash, dataset_hash(scan_dataset(config.data, config.split(), config.seed), config.data));
  EXPECT_NE(hash, dataset_hash(scan_dataset(config.data, config.split(), config.seed + 1), config.data));

  write_reports(run, config, hash, tmp / "out");
  for (const char* f : {"cms.csv", "roc.csv", "decisions.csv", "summary.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(tmp / "out" / f)) << f;
  }
  const auto summary = read_bytes(tmp / "out" / "summary.txt");
  EXPECT_NE(summary.find("rank1 = "), std::string::npos);
  EXPECT_NE(summary.find("dataset_hash = " + hash), std::string::npos);
  EXPECT_NE(summary.find(config.to_text()), std::string::npos);
  EXPECT_EQ(read_bytes(tmp / "out" / "cms.csv").substr(0, 11), "rank,score\n");
}

}  // namespace
}  // namespace mapface
