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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "mapface/eval.hpp"
#include "mapface/random.hpp"
#include "support/errors.hpp"

namespace mapface {
namespace {

using testing::code_of;

ScoreMatrix random_matrix(Rng& rng, std::size_t probes, std::size_t classes, bool coarse) {
  ScoreMatrix m{Eigen::MatrixXd(probes, classes), {}};
  for (auto& v : m.scores.reshaped()) v = coarse ? static_cast<double>(rng.below(4)) : rng.normal();
  for (std::size_t p = 0; p < probes; ++p) m.truth.push_back(rng.below(classes));
  return m;
}

// Rank of the true class after sorting a probe's row; ties placed before the truth.
std::size_t sorted_rank(const ScoreMatrix& m, std::size_t p, bool pessimistic) {
  std::vector<std::pair<double, int>> row;  // (score, is_truth)
  for (std::size_t i = 0; i < m.classes(); ++i) row.push_back({m.scores(p, i), i == m.truth[p]});
  std::sort(row.begin(), row.end(), [&](auto a, auto b) {
    if (a.first != b.first) return a.first > b.first;
    return pessimistic ? a.second < b.second : a.second > b.second;
  });
  for (std::size_t r = 0; r < row.size(); ++r)
    if (row[r].second) return r + 1;
  return 0;
}

std::vector<double> cms_oracle(const ScoreMatrix& m, bool pessimistic) {
  std::vector<double> out(m.classes());
  for (std::size_t r = 1; r <= m.classes(); ++r) {
    std::size_t hits = 0;
    for (std::size_t p = 0; p < m.probes(); ++p) hits += sorted_rank(m, p, pessimistic) <= r;
    out[r - 1] = static_cast<double>(hits) / static_cast<double>(m.probes());
  }
  return out;
}

TEST(Cms, PerfectIdentification) {
  ScoreMatrix m{Eigen::MatrixXd(3, 3), {0, 1, 2}};
  m.scores << 5, 1, 0, 0, 5, 1, 1, 0, 5;
  EXPECT_EQ(cms(m), (std::vector<double>{1, 1, 1}));
}

TEST(Cms, OneAtRankTwo) {
  ScoreMatrix m{Eigen::MatrixXd(2, 2), {0, 0}};
  m.scores << 2, 1, 1, 2;
  EXPECT_EQ(cms(m), (std::vector<double>{0.5, 1.0}));
}

TEST(Cms, TiesCountAgainstTheTruth) {
  ScoreMatrix m{Eigen::MatrixXd(1, 3), {1}};
  m.scores << 3, 3, 3;
  EXPECT_EQ(pessimistic_rank(m, 0), 3u);
  EXPECT_EQ(cms(m), (std::vector<double>{0, 0, 1}));
}

TEST(Cms, MatchesExhaustiveRanking) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 10, 5, trial % 2 == 0);
    EXPECT_EQ(cms(m), cms_oracle(m, true));
  }
}

TEST(Cms, InvalidMatrices) {
  ScoreMatrix empty{Eigen::MatrixXd(0, 3), {}};
  EXPECT_EQ(code_of([&] { cms(empty); }), Errc::EmptyMatrix);
  ScoreMatrix bad_truth{Eigen::MatrixXd::Zero(1, 2), {2}};
  EXPECT_EQ(code_of([&] { cms(bad_truth); }), Errc::IndexOutOfRange);
}

TEST(Roc, PerfectSeparation) {
  const auto r = roc_eer(std::vector<double>(5, 1.0), std::vector<double>(9, 0.0));
  EXPECT_DOUBLE_EQ(r.eer, 0.0);
}

TEST(Roc, IdenticalDistributions) {
  EXPECT_DOUBLE_EQ(roc_eer({0.0}, {0.0}).eer, 0.5);
  EXPECT_DOUBLE_EQ(roc_eer({1, 2, 3}, {1, 2, 3}).eer, 0.5);
  Rng rng(2);
  std::vector<double> s(200);
  for (auto& v : s) v = rng.normal();
  EXPECT_DOUBLE_EQ(roc_eer(s, s).eer, 0.5);
}

TEST(Roc, HandSweep) {
  // Thresholds -inf, 1, 2, 3, inf.
  const auto r = roc_eer({2, 3}, {1, 2});
  ASSERT_EQ(r.roc.size(), 5u);
  const double far[] = {1, 1, 0.5, 0, 0};
  const double frr[] = {0, 0, 0, 0.5, 1};
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(r.roc[i].far, far[i]) << i;
    EXPECT_DOUBLE_EQ(r.roc[i].frr, frr[i]) << i;
  }
  // FAR - FRR goes 0.5 -> -0.5 between thresholds 2 and 3.
  EXPECT_DOUBLE_EQ(r.eer, 0.25);
}

TEST(Roc, GaussianMatchesDenseGrid) {
  Rng rng(3);
  std::vector<double> genuine(4000), impostor(4000);
  for (auto& v : genuine) v = rng.normal(1.5, 1.0);
  for (auto& v : impostor) v = rng.normal(0.0, 1.0);
  const double eer = roc_eer(genuine, impostor).eer;

  double best_gap = INFINITY, oracle = 0;
  for (double t = -5.0; t <= 7.0; t += 1e-4) {
    const double far = std::count_if(impostor.begin(), impostor.end(), [t](double s) { return s >= t; }) / 4000.0;
    const double frr = std::count_if(genuine.begin(), genuine.end(), [t](double s) { return s < t; }) / 4000.0;
    if (std::abs(far - frr) < best_gap) {
      best_gap = std::abs(far - frr);
      oracle = 0.5 * (far + frr);
    }
  }
  EXPECT_NEAR(eer, oracle, 1e-3);
  // Two unit Gaussians 1.5 apart cross at 0.75: Phi(-0.75) ~= 0.2266.
  EXPECT_NEAR(eer, 0.2266, 0.02);
}

TEST(Roc, EmptyInputs) {
  EXPECT_EQ(code_of([] { roc_eer({}, {1.0}); }), Errc::EmptyMatrix);
  EXPECT_EQ(code_of([] { roc_eer({1.0}, {}); }), Errc::NoImpostors);
  ScoreMatrix single{Eigen::MatrixXd::Ones(3, 1), {0, 0, 0}};
  EXPECT_EQ(code_of([&] { roc_eer(single); }), Errc::NoImpostors);
}

TEST(Report, SingleClassHasNoEer) {
  ScoreMatrix single{Eigen::MatrixXd::Ones(3, 1), {0, 0, 0}};
  const auto r = make_report(single);
  EXPECT_EQ(r.cms, std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(r.rank1, 1.0);
  EXPECT_FALSE(r.eer.has_value());
}

TEST(Report, InvariantsOnRandomMatrices) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 2 + rng.below(10);
    const auto m = random_matrix(rng, 1 + rng.below(30), c, trial % 3 == 0);
    const auto r = make_report(m);
    ASSERT_EQ(r.cms.size(), c);
    for (std::size_t i = 1; i < c; ++i) EXPECT_LE(r.cms[i - 1], r.cms[i]);
    EXPECT_DOUBLE_EQ(r.cms.back(), 1.0);
    EXPECT_DOUBLE_EQ(r.rank1, r.cms.front());
    ASSERT_TRUE(r.eer.has_value());
    EXPECT_GE(*r.eer, 0.0);
    EXPECT_LE(*r.eer, 1.0);
    EXPECT_EQ(r.roc.front().threshold, -std::numeric_limits<double>::infinity());
    EXPECT_DOUBLE_EQ(r.roc.front().far, 1.0);
    EXPECT_DOUBLE_EQ(r.roc.front().frr, 0.0);
    EXPECT_EQ(r.roc.back().threshold, std::numeric_limits<double>::infinity());
    EXPECT_DOUBLE_EQ(r.roc.back().far, 0.0);
    EXPECT_DOUBLE_EQ(r.roc.back().frr, 1.0);
    for (std::size_t i = 1; i < r.roc.size(); ++i) {
      EXPECT_LT(r.roc[i - 1].threshold, r.roc[i].threshold);
      EXPECT_GE(r.roc[i - 1].far, r.roc[i].far);
      EXPECT_LE(r.roc[i - 1].frr, r.roc[i].frr);
    }
    const auto optimistic = cms_oracle(m, false);
    for (std::size_t i = 0; i < c; ++i) EXPECT_LE(r.cms[i], optimistic[i]);
  }
}

TEST(Report, EerInvariantUnderMonotoneTransform) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_matrix(rng, 20, 6, trial % 2 == 0);
    ScoreMatrix shifted = m;
    shifted.scores = (3.0 * m.scores.array() + 7.0).matrix();
    ScoreMatrix squashed = m;
    squashed.scores = m.scores.unaryExpr([](double v) { return std::atan(v / 4.0); });
    const double eer = roc_eer(m).eer;
    EXPECT_NEAR(roc_eer(shifted).eer, eer, 1e-12);
    EXPECT_NEAR(roc_eer(squashed).eer, eer, 1e-12);
    EXPECT_EQ(cms(shifted), cms(m));
  }
}

TEST(Csv, Format) {
  EXPECT_EQ(cms_csv({0.5, 1.0}), "rank,score\n1,0.5\n2,1\n");
  const std::vector<RocPoint> roc{{-std::numeric_limits<double>::infinity(), 1, 0},
                                  {0.25, 0.5, 0.5},
                                  {std::numeric_limits<double>::infinity(), 0, 1}};
  EXPECT_EQ(roc_csv(roc), "threshold,far,frr\n-inf,1,0\n0.25,0.5,0.5\ninf,0,1\n");
  EXPECT_EQ(format_number(0.1), "0.1");
}

}  // namespace
}  // namespace mapface
