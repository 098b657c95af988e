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
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "mapface/error.hpp"
#include "mapface/ingest.hpp"
#include "mapface/random.hpp"
#include "support/errors.hpp"
#include "support/temp_dir.hpp"

namespace mapface {
namespace {

using testing::code_of;
using testing::TempDir;
using testing::write_bytes;

void make_class(const std::filesystem::path& dir, int n, int w = 4, int h = 3) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < n; ++i) {
    Plane p = Plane::Constant(h, w, 10.0 * i);
    char name[16];
    std::snprintf(name, sizeof name, "%02d.pgm", i);
    save_image(dir / name, RgbImage::from_gray(p), true);
  }
}

TEST(LoadImage, BinaryPgmReplicatesGray) {
  TempDir tmp;
  write_bytes(tmp / "a.pgm", std::string("P5\n2 2\n255\n") + '\x00' + '\x55' + '\xaa' + '\xff');
  const auto img = load_image(tmp / "a.pgm");
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_DOUBLE_EQ(img.r(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img.r(0, 1), 85.0);
  EXPECT_DOUBLE_EQ(img.r(1, 0), 170.0);
  EXPECT_DOUBLE_EQ(img.r(1, 1), 255.0);
  EXPECT_TRUE(img.is_gray());
}

TEST(LoadImage, BinaryPpmPixel) {
  TempDir tmp;
  write_bytes(tmp / "red.ppm", std::string("P6\n1 1\n255\n") + '\xff' + '\x00' + '\x00');
  const auto img = load_image(tmp / "red.ppm");
  EXPECT_DOUBLE_EQ(img.r(0, 0), 255.0);
  EXPECT_DOUBLE_EQ(img.g(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img.b(0, 0), 0.0);
}

TEST(LoadImage, AsciiFormatsAndComments) {
  TempDir tmp;
  write_bytes(tmp / "a.pgm", "P2\n# comment\n3 1\n15\n0 5 15\n");
  const auto g = load_image(tmp / "a.pgm");
  EXPECT_DOUBLE_EQ(g.r(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(g.r(0, 1), 85.0);
  EXPECT_DOUBLE_EQ(g.r(0, 2), 255.0);

  write_bytes(tmp / "a.ppm", "P3 1 1 255 10 20 30\n");
  const auto c = load_image(tmp / "a.ppm");
  EXPECT_DOUBLE_EQ(c.r(0, 0), 10.0);
  EXPECT_DOUBLE_EQ(c.g(0, 0), 20.0);
  EXPECT_DOUBLE_EQ(c.b(0, 0), 30.0);
}

TEST(LoadImage, ErrorPaths) {
  TempDir tmp;
  write_bytes(tmp / "short.pgm", std::string("P5\n4 4\n255\n") + "abc");
  EXPECT_EQ(code_of([&] { load_image(tmp / "short.pgm"); }), Errc::CorruptFile);

  write_bytes(tmp / "x.pgm", "GIF89a....");
  EXPECT_EQ(code_of([&] { load_image(tmp / "x.pgm"); }), Errc::UnsupportedFormat);

  EXPECT_EQ(code_of([&] { load_image(tmp / "missing.pgm"); }), Errc::IoFailure);
}

TEST(LoadImage, SaveRoundTrip) {
  TempDir tmp;
  RgbImage img{Plane(2, 3), Plane(2, 3), Plane(2, 3)};
  img.r << 0, 1, 2, 3, 4, 5;
  img.g << 9, 8, 7, 6, 5, 4;
  img.b << 255, 128, 0, 1, 2, 3;
  save_image(tmp / "c.ppm", img);
  const auto back = load_image(tmp / "c.ppm");
  EXPECT_EQ(back.r, img.r);
  EXPECT_EQ(back.g, img.g);
  EXPECT_EQ(back.b, img.b);
}

TEST(Resize, ConstantStaysConstant) {
  const Plane p = Plane::Constant(9, 7, 42.0);
  const Plane out = resize_plane(p, 64, 64);
  ASSERT_EQ(out.rows(), 64);
  ASSERT_EQ(out.cols(), 64);
  EXPECT_LE((out.array() - 42.0).abs().maxCoeff(), 1e-12);
}

TEST(Resize, TwoPixelsUpsampleMonotone) {
  Plane p(1, 2);
  p << 0, 255;
  const Plane out = resize_plane(p, 4, 1);
  for (int x = 1; x < 4; ++x) EXPECT_LE(out(0, x - 1), out(0, x));
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(0, 3), 255.0);
}

// A bilinear interpolant reproduces an affine ramp exactly, so each output
// sample equals the ramp evaluated at its (clamped) half-pixel source position.
TEST(Resize, RampMatchesHandFormula) {
  auto ramp = [](double x, double y) { return 20.0 + 10.0 * x + 40.0 * y; };
  Plane p(3, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) p(y, x) = ramp(x, y);
  const Plane out = resize_plane(p, 5, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      const double sx = std::clamp((x + 0.5) * 3.0 / 5.0 - 0.5, 0.0, 2.0);
      const double sy = std::clamp((y + 0.5) * 3.0 / 5.0 - 0.5, 0.0, 2.0);
      EXPECT_NEAR(out(y, x), ramp(sx, sy), 1e-9) << y << "," << x;
    }
  }
}

TEST(Resize, IdempotentAtFixedSizeAndBounded) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = 1 + static_cast<int>(rng.below(20));
    const int w = 1 + static_cast<int>(rng.below(20));
    Plane p(h, w);
    for (auto& v : p.reshaped()) v = std::floor(rng.uniform(0, 256));
    const int tw = 1 + static_cast<int>(rng.below(30));
    const int th = 1 + static_cast<int>(rng.below(30));
    const Plane once = resize_plane(p, tw, th);
    EXPECT_EQ(resize_plane(once, tw, th), once);
    EXPECT_TRUE(once.allFinite());
    EXPECT_GE(once.minCoeff(), 0.0);
    EXPECT_LE(once.maxCoeff(), 255.0);
  }
}

TEST(Resize, ZeroTarget) {
  EXPECT_EQ(code_of([] { resize_plane(Plane::Ones(2, 2), 0, 3); }), Errc::ZeroDimension);
}

TEST(SplitSpec, Counts) {
  EXPECT_EQ(SplitSpec::per_class(5).train_count(10, "a"), 5u);
  EXPECT_EQ(SplitSpec::ratio(0.5).train_count(10, "a"), 5u);
  EXPECT_EQ(code_of([] { SplitSpec::per_class(1).train_count(1, "a"); }), Errc::ClassTooSmall);
  EXPECT_EQ(code_of([] { SplitSpec::per_class(10).train_count(10, "a"); }), Errc::ClassTooSmall);
}

TEST(ScanDataset, TwoClassesFiveFive) {
  TempDir tmp;
  make_class(tmp / "b", 10);
  make_class(tmp / "a", 10);
  const auto idx = scan_dataset(tmp.path(), SplitSpec::per_class(5), 7);
  ASSERT_EQ(idx.classes.size(), 2u);
  EXPECT_EQ(idx.classes[0].label, "a");
  EXPECT_EQ(idx.classes[1].label, "b");
  EXPECT_EQ(idx.count(Split::train), 10u);
  EXPECT_EQ(idx.count(Split::test), 10u);
  for (const auto& c : idx.classes) {
    EXPECT_EQ(c.paths(Split::train).size(), 5u);
    EXPECT_EQ(c.paths(Split::test).size(), 5u);
  }
}

TEST(ScanDataset, DeterministicAndSeedSensitive) {
  TempDir tmp;
  make_class(tmp / "a", 10);
  make_class(tmp / "b", 10);
  auto train_sets = [&](std::uint64_t seed) {
    const auto idx = scan_dataset(tmp.path(), SplitSpec::per_class(5), seed);
    std::vector<std::vector<std::filesystem::path>> out;
    for (const auto& c : idx.classes) out.push_back(c.paths(Split::train));
    return out;
  };
  EXPECT_EQ(train_sets(3), train_sets(3));
  bool differs = false;
  for (std::uint64_t s = 4; s < 10 && !differs; ++s) differs = train_sets(s) != train_sets(3);
  EXPECT_TRUE(differs);
}

TEST(ScanDataset, OrlLayout) {
  TempDir tmp;
  for (int c = 1; c <= 40; ++c) make_class(tmp / ("s" + std::to_string(c)), 10, 2, 2);
  const auto idx = scan_dataset(tmp.path(), SplitSpec::per_class(5), 1);
  EXPECT_EQ(idx.classes.size(), 40u);
  EXPECT_EQ(idx.count(Split::train), 200u);
  EXPECT_EQ(idx.count(Split::test), 200u);
  EXPECT_EQ(idx.total(), 400u);
  // Lexicographic, not numeric, ordering.
  EXPECT_EQ(idx.classes[1].label, "s10");
}

TEST(ScanDataset, ErrorPaths) {
  TempDir tmp;
  EXPECT_EQ(code_of([&] { scan_dataset(tmp / "nope", SplitSpec::per_class(1), 1); }),
            Errc::EmptyDataset);
  EXPECT_EQ(code_of([&] { scan_dataset(tmp.path(), SplitSpec::per_class(1), 1); }),
            Errc::EmptyDataset);

  make_class(tmp / "solo", 1);
  EXPECT_EQ(code_of([&] { scan_dataset(tmp.path(), SplitSpec::per_class(1), 1); }),
            Errc::ClassTooSmall);

  TempDir bad;
  make_class(bad / "a", 3);
  write_bytes(bad / "a" / "zz.pgm", "P5\n9 9\n255\n");
  EXPECT_EQ(code_of([&] { scan_dataset(bad.path(), SplitSpec::per_class(1), 1); }),
            Errc::UnreadableImage);
}

TEST(ScanDataset, IgnoresNonImages) {
  TempDir tmp;
  make_class(tmp / "a", 4);
  write_bytes(tmp / "a" / "notes.txt", "hello");
  const auto idx = scan_dataset(tmp.path(), SplitSpec::per_class(2), 1);
  EXPECT_EQ(idx.total(), 4u);
}

TEST(ScanDataset, PartitionProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    TempDir tmp;
    std::size_t total = 0;
    const int classes = 2 + static_cast<int>(rng.below(4));
    for (int c = 0; c < classes; ++c) {
      const int n = 3 + static_cast<int>(rng.below(5));
      make_class(tmp / ("c" + std::to_string(c)), n, 2, 2);
      total += static_cast<std::size_t>(n);
    }
    const auto idx = scan_dataset(tmp.path(), SplitSpec::per_class(2), rng.next());
    EXPECT_EQ(idx.count(Split::train) + idx.count(Split::test), total);
    for (const auto& c : idx.classes) {
      EXPECT_EQ(c.paths(Split::train).size(), 2u);
      std::set<std::filesystem::path> seen;
      for (const auto& e : c.images) EXPECT_TRUE(seen.insert(e.path).second);
    }
  }
}

}  // namespace
}  // namespace mapface
