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

#include "mapface/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mapface/error.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "baselines";

struct Gathered {
  Eigen::Index k = 0;
  std::size_t total = 0;
  Eigen::VectorXd global_mean;
  std::vector<Eigen::VectorXd> class_means;
};

Gathered gather(std::span<const std::vector<Eigen::VectorXd>> per_class) {
  Gathered g;
  for (const auto& cls : per_class) {
    if (cls.empty()) throw Error(Errc::DimensionMismatch, kModule, "class without samples");
    for (const auto& x : cls) {
      if (g.total == 0) {
        g.k = x.size();
        g.global_mean = Eigen::VectorXd::Zero(g.k);
      }
      if (x.size() != g.k || g.k == 0) {
        throw Error(Errc::DimensionMismatch, kModule, "inconsistent feature dimension");
      }
      g.global_mean += x;
      ++g.total;
    }
  }
  if (g.total == 0) throw Error(Errc::DimensionMismatch, kModule, "no samples");
  g.global_mean /= static_cast<double>(g.total);
  for (const auto& cls : per_class) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(g.k);
    for (const auto& x : cls) mu += x;
    g.class_means.push_back(mu / static_cast<double>(cls.size()));
  }
  return g;
}

// Flip so the largest-magnitude entry (first on ties) is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) v = -v;
}

}  // namespace

LdaModel fit_lda(std::span<const std::vector<Eigen::VectorXd>> per_class, std::size_t m) {
  if (per_class.size() < 2) {
    throw Error(Errc::TooFewClasses, kModule, "LDA needs at least two classes");
  }
  const Gathered g = gather(per_class);
  const auto k = static_cast<std::size_t>(g.k);
  const std::size_t max_dims = std::min(per_class.size() - 1, k);
  if (m < 1 || m > max_dims) {
    throw Error(Errc::DimensionMismatch, kModule,
                "LDA dimension " + std::to_string(m) + " outside [1, " + std::to_string(max_dims) + "]");
  }

  LdaModel model;
  model.global_mean = g.global_mean;
  model.between_scatter = Eigen::MatrixXd::Zero(g.k, g.k);
  model.within_scatter = Eigen::MatrixXd::Zero(g.k, g.k);
  for (std::size_t i = 0; i < per_class.size(); ++i) {
    const Eigen::VectorXd d = g.class_means[i] - g.global_mean;
    model.between_scatter += static_cast<double>(per_class[i].size()) * d * d.transpose();
    for (const auto& x : per_class[i]) {
      const Eigen::VectorXd c = x - g.class_means[i];
      model.within_scatter += c * c.transpose();
    }
  }

  model.epsilon = default_regularization(model.within_scatter);
  Eigen::MatrixXd sw = model.within_scatter;
  sw.diagonal().array() += model.epsilon;
  Eigen::LLT<Eigen::MatrixXd> llt(sw);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::DegenerateCovariance, kModule, "within-class scatter not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  // A = L^-1 S_b L^-T
  Eigen::MatrixXd tmp = L.triangularView<Eigen::Lower>().solve(model.between_scatter);
  Eigen::MatrixXd a = L.triangularView<Eigen::Lower>().solve(tmp.transpose());
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) {
    throw Error(Errc::DegenerateCovariance, kModule, "eigendecomposition failed");
  }

  const auto md = static_cast<Eigen::Index>(m);
  model.projection.resize(md, g.k);
  model.eigenvalues.resize(md);
  for (Eigen::Index r = 0; r < md; ++r) {
    const Eigen::Index src = g.k - 1 - r;  // ascending from Eigen
    Eigen::VectorXd e = L.transpose().triangularView<Eigen::Upper>().solve(eig.eigenvectors().col(src));
    e.normalize();
    fix_sign(e);
    model.projection.row(r) = e.transpose();
    model.eigenvalues[r] = eig.eigenvalues()[src];
  }
  for (const auto& mu : g.class_means) model.class_means_projected.push_back(project_lda(model, mu));
  return model;
}

Eigen::VectorXd project_lda(const LdaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.projection.cols()) {
    throw Error(Errc::DimensionMismatch, kModule, "LDA input has wrong dimension");
  }
  return model.projection * (x - model.global_mean);
}

PcaModel fit_pca(std::span<const std::vector<Eigen::VectorXd>> per_class, std::size_t m) {
  const Gathered g = gather(per_class);
  const auto k = static_cast<std::size_t>(g.k);
  if (m < 1 || m > std::min(k, g.total)) {
    throw Error(Errc::DimensionMismatch, kModule,
                "PCA dimension " + std::to_string(m) + " outside [1, " +
                    std::to_string(std::min(k, g.total)) + "]");
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(g.k, g.k);
  for (const auto& cls : per_class) {
    for (const auto& x : cls) {
      const Eigen::VectorXd c = x - g.global_mean;
      cov += c * c.transpose();
    }
  }
  cov /= static_cast<double>(g.total);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw Error(Errc::DegenerateCovariance, kModule, "eigendecomposition failed");
  }

  PcaModel model;
  model.mean = g.global_mean;
  const auto md = static_cast<Eigen::Index>(m);
  model.components.resize(md, g.k);
  model.eigenvalues.resize(md);
  for (Eigen::Index r = 0; r < md; ++r) {
    const Eigen::Index src = g.k - 1 - r;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    fix_sign(v);
    model.components.row(r) = v.transpose();
    model.eigenvalues[r] = std::max(eig.eigenvalues()[src], 0.0);
  }
  for (const auto& mu : g.class_means) model.class_means_projected.push_back(project_pca(model, mu));
  return model;
}

Eigen::VectorXd project_pca(const PcaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.components.cols()) {
    throw Error(Errc::DimensionMismatch, kModule, "PCA input has wrong dimension");
  }
  return model.components * (x - model.mean);
}

Eigen::VectorXd reconstruct_pca(const PcaModel& model, const Eigen::VectorXd& projected) {
  if (projected.size() != model.components.rows()) {
    throw Error(Errc::DimensionMismatch, kModule, "projection has wrong dimension");
  }
  return model.mean + model.components.transpose() * projected;
}

std::vector<double> euclidean_scores(std::span<const Eigen::VectorXd> projected_means,
                                     const Eigen::VectorXd& projected_x) {
  std::vector<double> out;
  out.reserve(projected_means.size());
  for (const auto& mu : projected_means) {
    if (mu.size() != projected_x.size()) {
      throw Error(Errc::DimensionMismatch, kModule, "projected dimensions differ");
    }
    out.push_back(-(mu - projected_x).norm());
  }
  return out;
}

std::size_t classify_euclidean(std::span<const Eigen::VectorXd> projected_means,
                               const Eigen::VectorXd& projected_x) {
  const auto s = euclidean_scores(projected_means, projected_x);
  return argmax_lowest(s);
}

BaselineModel BaselineModel::fit(BaselineKind kind, std::span<const ClassSamples> classes,
                                 ColorMode mode, std::optional<std::size_t> dims) {
  if (classes.empty()) throw Error(Errc::TooFewClasses, kModule, "no classes to fit");
  const auto chans = channels_for(mode);
  BaselineModel model;
  model.kind_ = kind;
  model.mode_ = mode;
  std::size_t total = 0;
  for (const auto& cls : classes) {
    if (cls.per_channel.size() != chans.size()) {
      throw Error(Errc::MissingChannel, kModule, "class '" + cls.label + "' has wrong channel count");
    }
    if (std::find(model.labels_.begin(), model.labels_.end(), cls.label) != model.labels_.end()) {
      throw Error(Errc::DuplicateLabel, kModule, "label '" + cls.label + "' appears twice");
    }
    model.labels_.push_back(cls.label);
    total += cls.per_channel.front().size();
  }
  if (classes.front().per_channel.front().empty()) {
    throw Error(Errc::DimensionMismatch, kModule, "class without samples");
  }
  model.k_ = static_cast<std::size_t>(classes.front().per_channel.front().front().size());

  for (std::size_t slot = 0; slot < chans.size(); ++slot) {
    ClassVectors grouped;
    for (const auto& cls : classes) grouped.push_back(cls.per_channel[slot]);
    if (kind == BaselineKind::lda) {
      const std::size_t cap = std::min(classes.size() - (classes.size() > 1 ? 1 : 0), model.k_);
      model.models_.emplace_back(fit_lda(grouped, dims.value_or(cap)));
    } else {
      const std::size_t cap = std::min({std::size_t{40}, model.k_, total});
      model.models_.emplace_back(fit_pca(grouped, dims.value_or(cap)));
    }
  }
  return model;
}

Decision BaselineModel::classify(std::span<const FeatureVector> features) const {
  const auto chans = channels_for(mode_);
  Decision d;
  d.scores.assign(labels_.size(), 0.0);
  for (std::size_t slot = 0; slot < chans.size(); ++slot) {
    const auto it = std::find_if(features.begin(), features.end(),
                                 [&](const FeatureVector& f) { return f.channel == chans[slot]; });
    if (it == features.end()) {
      throw Error(Errc::MissingChannel, kModule,
                  "missing " + std::string(channel_name(chans[slot])) + " feature vector");
    }
    const auto s = std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, PcaModel>) {
            return euclidean_scores(m.class_means_projected, project_pca(m, it->values));
          } else {
            return euclidean_scores(m.class_means_projected, project_lda(m, it->values));
          }
        },
        models_[slot]);
    for (std::size_t i = 0; i < s.size(); ++i) d.scores[i] += s[i];
  }
  for (auto& v : d.scores) v /= static_cast<double>(chans.size());
  d.class_index = argmax_lowest(d.scores);
  d.similarity = d.scores;
  return d;
}

BaselineModel BaselineModel::from_parts(BaselineKind kind, ColorMode mode, std::size_t k,
                                        std::vector<std::string> labels,
                                        std::vector<ChannelModel> models) {
  if (models.size() != channels_for(mode).size()) {
    throw Error(Errc::MissingChannel, kModule, "channel count does not match colour mode");
  }
  BaselineModel m;
  m.kind_ = kind;
  m.mode_ = mode;
  m.k_ = k;
  m.labels_ = std::move(labels);
  m.models_ = std::move(models);
  return m;
}

}  // namespace mapface
