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
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mapface/classify.hpp"

namespace mapface {

/// Fisher discriminant. Rows of projection are unit-norm generalized
/// eigenvectors of S_b e = lambda (S_w + eps I) e, eigenvalues descending.
struct LdaModel {
  Eigen::MatrixXd projection;  // m x k
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd global_mean;
  std::vector<Eigen::VectorXd> class_means_projected;
  Eigen::MatrixXd between_scatter;
  Eigen::MatrixXd within_scatter;
  double epsilon = 0.0;
};

/// Eigenfaces on feature vectors. Components are orthonormal rows.
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // m x k
  Eigen::VectorXd eigenvalues;
  std::vector<Eigen::VectorXd> class_means_projected;
};

/// Samples grouped by class; per_class[i][j] is sample j of class i.
using ClassVectors = std::vector<std::vector<Eigen::VectorXd>>;

/// Solved through a Cholesky factor L of the regularized S_w: the symmetric
/// matrix L^-1 S_b L^-T is eigendecomposed and eigenvectors mapped back by L^-T.
LdaModel fit_lda(std::span<const std::vector<Eigen::VectorXd>> per_class, std::size_t m);
Eigen::VectorXd project_lda(const LdaModel& model, const Eigen::VectorXd& x);

/// Top-m eigenvectors of the total covariance (divided by N) of the samples.
PcaModel fit_pca(std::span<const std::vector<Eigen::VectorXd>> per_class, std::size_t m);
Eigen::VectorXd project_pca(const PcaModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd reconstruct_pca(const PcaModel& model, const Eigen::VectorXd& projected);

/// Index of the nearest projected mean; lowest index on ties.
std::size_t classify_euclidean(std::span<const Eigen::VectorXd> projected_means,
                               const Eigen::VectorXd& projected_x);

/// Negated Euclidean distances, so that higher means more similar.
std::vector<double> euclidean_scores(std::span<const Eigen::VectorXd> projected_means,
                                     const Eigen::VectorXd& projected_x);

enum class BaselineKind : std::uint8_t { pca = 1, lda = 2 };

/// A PCA or LDA projection per channel with nearest-mean matching. In ycbcr
/// mode per-channel scores are averaged before the argmax, as for MAP.
class BaselineModel {
 public:
  using ChannelModel = std::variant<PcaModel, LdaModel>;

  /// dims defaults to c - 1 for LDA and 40 for PCA, clipped to what the data allows.
  static BaselineModel fit(BaselineKind kind, std::span<const ClassSamples> classes,
                           ColorMode mode, std::optional<std::size_t> dims = std::nullopt);

  Decision classify(std::span<const FeatureVector> features) const;

  BaselineKind kind() const noexcept { return kind_; }
  ColorMode color_mode() const noexcept { return mode_; }
  std::size_t k() const noexcept { return k_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t num_classes() const noexcept { return labels_.size(); }
  const std::vector<ChannelModel>& channel_models() const noexcept { return models_; }

  static BaselineModel from_parts(BaselineKind kind, ColorMode mode, std::size_t k,
                                  std::vector<std::string> labels,
                                  std::vector<ChannelModel> models);

 private:
  BaselineKind kind_ = BaselineKind::pca;
  ColorMode mode_ = ColorMode::grayscale;
  std::size_t k_ = 0;
  std::vector<std::string> labels_;
  std::vector<ChannelModel> models_;  // slots ordered as channels_for(mode)
};

}  // namespace mapface
