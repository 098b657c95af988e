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

#include "mapface/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "mapface/error.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "eval";

void validate(const ScoreMatrix& m) {
  if (m.truth.empty()) throw Error(Errc::EmptyMatrix, kModule, "score matrix has no probes");
  if (static_cast<std::size_t>(m.scores.rows()) != m.truth.size() || m.scores.cols() == 0) {
    throw Error(Errc::DimensionMismatch, kModule, "score matrix shape does not match truth list");
  }
  for (auto t : m.truth) {
    if (t >= m.classes()) throw Error(Errc::IndexOutOfRange, kModule, "truth index out of range");
  }
  if (!m.scores.allFinite()) throw Error(Errc::InvalidArgument, kModule, "non-finite score");
}

}  // namespace

std::size_t pessimistic_rank(const ScoreMatrix& m, std::size_t probe) {
  const auto p = static_cast<Eigen::Index>(probe);
  const auto t = static_cast<Eigen::Index>(m.truth[probe]);
  const double own = m.scores(p, t);
  std::size_t rank = 1;
  for (Eigen::Index i = 0; i < m.scores.cols(); ++i) {
    if (i != t && m.scores(p, i) >= own) ++rank;
  }
  return rank;
}

std::vector<double> cms(const ScoreMatrix& m) {
  validate(m);
  const std::size_t c = m.classes();
  std::vector<std::size_t> hits(c, 0);
  for (std::size_t p = 0; p < m.probes(); ++p) ++hits[pessimistic_rank(m, p) - 1];
  std::vector<double> out(c);
  std::size_t running = 0;
  for (std::size_t r = 0; r < c; ++r) {
    running += hits[r];
    out[r] = static_cast<double>(running) / static_cast<double>(m.probes());
  }
  return out;
}

RocResult roc_eer(std::vector<double> genuine, std::vector<double> impostor) {
  if (genuine.empty()) throw Error(Errc::EmptyMatrix, kModule, "no genuine scores");
  if (impostor.empty()) throw Error(Errc::NoImpostors, kModule, "no impostor scores");
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + impostor.size() + 2);
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  std::merge(genuine.begin(), genuine.end(), impostor.begin(), impostor.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin() + 1, thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const auto ng = static_cast<double>(genuine.size());
  const auto ni = static_cast<double>(impostor.size());
  RocResult out;
  out.roc.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto below_g = std::lower_bound(genuine.begin(), genuine.end(), t) - genuine.begin();
    const auto below_i = std::lower_bound(impostor.begin(), impostor.end(), t) - impostor.begin();
    out.roc.push_back({t, (ni - static_cast<double>(below_i)) / ni, static_cast<double>(below_g) / ng});
  }

  // FAR - FRR starts at 1 and ends at -1 and is nonincreasing along the sweep.
  for (std::size_t j = 0; j < out.roc.size(); ++j) {
    const double d = out.roc[j].far - out.roc[j].frr;
    if (d > 0.0) continue;
    if (d == 0.0 || j == 0) {
      out.eer = out.roc[j].far;
    } else {
      const auto& a = out.roc[j - 1];
      const auto& b = out.roc[j];
      const double da = a.far - a.frr;
      const double alpha = da / (da - d);
      out.eer = a.far + alpha * (b.far - a.far);
    }
    break;
  }
  return out;
}

RocResult roc_eer(const ScoreMatrix& m) {
  validate(m);
  if (m.classes() < 2) throw Error(Errc::NoImpostors, kModule, "single-class matrix has no impostor trials");
  std::vector<double> genuine;
  std::vector<double> impostor;
  genuine.reserve(m.probes());
  impostor.reserve(m.probes() * (m.classes() - 1));
  for (std::size_t p = 0; p < m.probes(); ++p) {
    for (std::size_t i = 0; i < m.classes(); ++i) {
      const double s = m.scores(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i));
      (i == m.truth[p] ? genuine : impostor).push_back(s);
    }
  }
  return roc_eer(std::move(genuine), std::move(impostor));
}

EvalReport make_report(const ScoreMatrix& m) {
  EvalReport r;
  r.cms = cms(m);
  r.rank1 = r.cms.front();
  if (m.classes() >= 2) {
    auto roc = roc_eer(m);
    r.roc = std::move(roc.roc);
    r.eer = roc.eer;
  }
  return r;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cms_csv(const std::vector<double>& cms) {
  std::string out = "rank,score\n";
  for (std::size_t r = 0; r < cms.size(); ++r) {
    out += std::to_string(r + 1);
    out += ',';
    out += format_number(cms[r]);
    out += '\n';
  }
  return out;
}

std::string roc_csv(const std::vector<RocPoint>& roc) {
  std::string out = "threshold,far,frr\n";
  for (const auto& p : roc) {
    out += format_number(p.threshold);
    out += ',';
    out += format_number(p.far);
    out += ',';
    out += format_number(p.frr);
    out += '\n';
  }
  return out;
}

}  // namespace mapface
