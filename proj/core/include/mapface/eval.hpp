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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mapface {

/// scores(p, i): similarity of probe p to enrolled class i (higher is more
/// similar). truth[p] is the probe's true class index.
struct ScoreMatrix {
  Eigen::MatrixXd scores;
  std::vector<std::size_t> truth;

  std::size_t probes() const noexcept { return truth.size(); }
  std::size_t classes() const noexcept { return static_cast<std::size_t>(scores.cols()); }
};

/// Rank of the true class (1-based) with ties counted against it:
/// 1 + #{rivals with score >= true score}.
std::size_t pessimistic_rank(const ScoreMatrix& m, std::size_t probe);

/// cms[r] = fraction of probes whose true class ranks within the top r + 1.
std::vector<double> cms(const ScoreMatrix& m);

struct RocPoint {
  double threshold;
  double far;
  double frr;
};

struct RocResult {
  std::vector<RocPoint> roc;
  double eer = 0.0;
};

/// Per-comparison verification: the true-class score of each probe is a
/// genuine trial, every other entry an impostor trial.
///   FAR(t) = #{impostor >= t} / #impostor,  FRR(t) = #{genuine < t} / #genuine
/// Thresholds sweep -inf, every distinct observed score ascending, +inf. The
/// EER interpolates linearly between the two sweep points bracketing FAR = FRR.
RocResult roc_eer(const ScoreMatrix& m);

/// Same sweep on raw genuine and impostor score lists.
RocResult roc_eer(std::vector<double> genuine, std::vector<double> impostor);

struct EvalReport {
  std::vector<double> cms;
  std::vector<RocPoint> roc;
  std::optional<double> eer;  // absent when there are no impostor trials
  double rank1 = 0.0;
};

/// Throws EmptyMatrix for zero probes; a single-class matrix yields a report
/// without ROC/EER.
EvalReport make_report(const ScoreMatrix& m);

/// "rank,score" with ranks starting at 1.
std::string cms_csv(const std::vector<double>& cms);
/// "threshold,far,frr"; infinite thresholds print as -inf / inf.
std::string roc_csv(const std::vector<RocPoint>& roc);

/// Shortest round-trippable decimal form used in every report file.
std::string format_number(double v);

}  // namespace mapface
