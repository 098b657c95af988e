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


#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mapface/ingest.hpp"
#include "mapface/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace mapface {
namespace {

using testing::read_bytes;
using testing::TempDir;
using testing::write_bytes;

struct Result {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

Result run(const std::vector<std::string>& args) {
  std::string cmd = quote(MAPFACE_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.classes = 4;
    spec.images_per_class = 5;
    spec.width = 20;
    spec.height = 20;
    spec.seed = 17;
    write_dataset(generate_faces(spec), data());
  }

  std::string data() const { return (tmp_ / "data").string(); }
  std::string out(const std::string& name) const { return (tmp_ / name).string(); }

  std::vector<std::string> common(const std::string& sub, const std::string& out_dir) const {
    return {sub, "--data", data(), "--out", out_dir, "--size", "16x16", "--k", "10",
            "--train-per-class", "3"};
  }

  TempDir tmp_;
};

TEST_F(Cli, TrainWritesModelAndLog) {
  const auto r = run(common("train", out("t")));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(out("t") + "/model.mapf"));
  const auto log = read_bytes(out("t") + "/train.log");
  EXPECT_NE(log.find("train_seconds"), std::string::npos);
}

TEST_F(Cli, MissingDatasetIsInputError) {
  const auto r = run({"train", "--data", out("nowhere"), "--out", out("t")});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("[ingest]"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("EmptyDataset"), std::string::npos) << r.output;
}

TEST_F(Cli, UnwritableOutputIsIoError) {
  write_bytes(tmp_ / "blocker", "not a directory");
  const auto r = run(common("evaluate", out("blocker") + "/sub"));
  EXPECT_EQ(r.status, 3) << r.output;
  EXPECT_NE(r.output.find("IoFailure"), std::string::npos) << r.output;
}

TEST_F(Cli, BadFlagsAreInputErrors) {
  EXPECT_EQ(run({"train", "--bogus"}).status, 2);
  EXPECT_EQ(run(common("train", out("t"))).status, 0);
  auto args = common("train", out("t2"));
  args.insert(args.end(), {"--color", "rgb"});
  EXPECT_EQ(run(args).status, 2);
  EXPECT_EQ(run({}).status, 2);
}

TEST_F(Cli, AddClassTwiceIsDuplicate) {
  ASSERT_EQ(run(common("train", out("t"))).status, 0);
  SyntheticSpec extra;
  extra.classes = 1;
  extra.images_per_class = 3;
  extra.width = 37;  // different from both the corpus and the model size
  extra.height = 29;
  extra.seed = 99;
  write_dataset(generate_faces(extra), tmp_ / "extra");
  const std::string dir = out("extra") + "/c000";
  const std::vector<std::string> add{"add-class", "--model", out("t") + "/model.mapf", "--class-dir",
                                     dir, "--label", "newcomer"};
  const auto first = run(add);
  ASSERT_EQ(first.status, 0) << first.output;
  const auto second = run(add);
  EXPECT_EQ(second.status, 2);
  EXPECT_NE(second.output.find("DuplicateLabel"), std::string::npos) << second.output;

  const auto rec = run({"recognize", "--model", out("t") + "/model.mapf", "--image", dir + "/00.ppm"});
  ASSERT_EQ(rec.status, 0) << rec.output;
  EXPECT_NE(rec.output.find("1\tnewcomer\t"), std::string::npos) << rec.output;
}

TEST_F(Cli, EvaluateIsByteReproducible) {
  ASSERT_EQ(run(common("evaluate", out("a"))).status, 0);
  ASSERT_EQ(run(common("evaluate", out("b"))).status, 0);
  for (const char* f : {"cms.csv", "roc.csv", "decisions.csv"}) {
    const auto a = read_bytes(out("a") + "/" + f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, read_bytes(out("b") + "/" + f)) << f;
  }
}

TEST_F(Cli, ClassifiersAndColourModesProduceSummaries) {
  for (const char* kind : {"map", "pca", "lda"}) {
    for (const char* colour : {"gray", "ycbcr"}) {
      const std::string dir = out(std::string("s-") + kind + "-" + colour);
      auto args = common("evaluate", dir);
      args.insert(args.end(), {"--classifier", kind, "--color", colour});
      const auto r = run(args);
      ASSERT_EQ(r.status, 0) << kind << " " << colour << "\n" << r.output;
      const auto summary = read_bytes(dir + "/summary.txt");
      EXPECT_NE(summary.find(std::string("classifier = ") + kind), std::string::npos);
      EXPECT_NE(summary.find("rank1 = "), std::string::npos);
      EXPECT_NE(summary.find("eer = "), std::string::npos);
      EXPECT_NE(summary.find("seed = 1\n"), std::string::npos) << "defaults are echoed";
    }
  }
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  write_bytes(tmp_ / "run.cfg", "k = 6\nselect = mask\nseed = 5\n");
  auto args = common("evaluate", out("cfg"));
  args.insert(args.begin() + 1, {"--config", out("run.cfg")});
  args.insert(args.end(), {"--seed", "8"});
  const auto r = run(args);
  ASSERT_EQ(r.status, 0) << r.output;
  const auto summary = read_bytes(out("cfg") + "/summary.txt");
  EXPECT_NE(summary.find("seed = 8\n"), std::string::npos) << summary;
  EXPECT_NE(summary.find("select = mask\n"), std::string::npos) << summary;
  EXPECT_NE(summary.find("k = 10\n"), std::string::npos) << summary;
}

TEST_F(Cli, RecognizeTrainingImageAndCorruptProbe) {
  ASSERT_EQ(run(common("train", out("t"))).status, 0);
  const std::string model = out("t") + "/model.mapf";
  // Resubstitution: every image of c002 was seen or is close; check a training one.
  bool any_train_hit = false;
  for (int i = 0; i < 5 && !any_train_hit; ++i) {
    const auto r = run({"recognize", "--model", model, "--image", data() + "/c002/0" + std::to_string(i) + ".ppm"});
    ASSERT_EQ(r.status, 0) << r.output;
    any_train_hit = r.output.find("1\tc002\t") != std::string::npos;
  }
  EXPECT_TRUE(any_train_hit);

  write_bytes(tmp_ / "broken.ppm", "P6\n10 10\n255\nxx");
  const auto bad = run({"recognize", "--model", model, "--image", out("broken.ppm")});
  EXPECT_EQ(bad.status, 2) << bad.output;
  EXPECT_NE(bad.output.find("CorruptFile"), std::string::npos) << bad.output;

  Plane g = Plane::Constant(16, 16, 90.0);
  g(3, 3) = 200;
  save_image(tmp_ / "gray.pgm", RgbImage::from_gray(g), true);
  EXPECT_EQ(run({"recognize", "--model", model, "--image", out("gray.pgm")}).status, 0);
}

TEST_F(Cli, CorruptModelIsReported) {
  ASSERT_EQ(run(common("train", out("t"))).status, 0);
  auto bytes = read_bytes(out("t") + "/model.mapf");
  bytes[bytes.size() / 2] ^= 1;
  write_bytes(tmp_ / "bad.mapf", bytes);
  const auto r = run({"recognize", "--model", out("bad.mapf"), "--image", data() + "/c000/00.ppm"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("ChecksumMismatch"), std::string::npos) << r.output;
}

}  // namespace
}  // namespace mapface
