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
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "mapface/features.hpp"
#include "mapface/preprocess.hpp"

namespace mapface {

/// Channels a model carries for a colour mode: {Y} or {Y, Cb, Cr}.
std::vector<Channel> channels_for(ColorMode mode);

/// Training vectors for one class; per_channel[slot][sample], slots ordered as
/// channels_for(mode).
struct ClassSamples {
  std::string label;
  std::vector<std::vector<Eigen::VectorXd>> per_channel;
};

/// Per-class mean and centred scatter  S = sum_j (x_j - mu)(x_j - mu)^T.
struct ClassStatistics {
  std::string label;
  std::size_t count = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd scatter;

  /// Scatter is assembled from its lower triangle so it is exactly symmetric,
  /// and is exactly zero for a single sample.
  static ClassStatistics from_samples(std::string label, std::span<const Eigen::VectorXd> samples);
};

/// Winning class (lowest index on ties) and the full score list.
///
/// similarity holds scores comparable across probes, used for verification
/// (ROC/EER). It ranks classes exactly as scores does; for MAP it adds back the
/// probe-dependent -0.5 x C^-1 x term that the linear discriminant drops.
struct Decision {
  std::size_t class_index = 0;
  std::vector<double> scores;
  std::vector<double> similarity;
};

std::size_t argmax_lowest(std::span<const double> scores);

/// Ridge added to the pooled scatter: max(1e-6 * trace / k, 1e-10).
double default_regularization(const Eigen::MatrixXd& pooled);

/// Linear MAP discriminant with a covariance shared by all classes and equal
/// priors. For each channel
///
///   g_i(x) = mu_i C^-1 x - 0.5 mu_i C^-1 mu_i,   C = C_g + eps I
///
/// where C_g is the unnormalized sum of per-class scatters. Classes can be
/// added without revisiting earlier classes: C_g grows by the new scatter and
/// the factorization is refreshed.
///
/// Queries are const and safe to run concurrently; train/add_class need
/// exclusive access.
class MapModel {
 public:
  /// Fits class statistics for every channel of mode. Vectors must all have
  /// the same length k.
  static MapModel train(std::span<const ClassSamples> classes, ColorMode mode,
                        std::optional<double> epsilon_override = std::nullopt);

  /// Appends a class. Throws DuplicateLabel / DimensionMismatch / MissingChannel.
  void add_class(const ClassSamples& cls);

  double discriminant(const Eigen::VectorXd& x, std::size_t class_index, Channel ch) const;
  std::vector<double> scores(const Eigen::VectorXd& x, Channel ch) const;

  /// 0.5 x C^-1 x for the channel's regularized covariance.
  double quadratic_term(const Eigen::VectorXd& x, Channel ch) const;

  /// discriminant minus quadratic_term, i.e. -0.5 (x - mu_i) C^-1 (x - mu_i).
  double log_posterior(const Eigen::VectorXd& x, std::size_t class_index, Channel ch) const;

  Decision classify_channel(const Eigen::VectorXd& x, Channel ch) const;

  /// Arithmetic mean of the per-channel discriminants, then argmax. Needs the
  /// Y, Cb and Cr vectors; ordering in the span does not matter.
  Decision classify_fused(std::span<const FeatureVector> features) const;

  /// classify_channel(Y) in grayscale mode, classify_fused in ycbcr mode.
  Decision classify(std::span<const FeatureVector> features) const;

  std::size_t k() const noexcept { return k_; }
  std::size_t num_classes() const noexcept { return labels_.size(); }
  ColorMode color_mode() const noexcept { return mode_; }
  std::vector<Channel> channels() const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<double> epsilon_override() const noexcept { return epsilon_override_; }

  const ClassStatistics& class_statistics(Channel ch, std::size_t class_index) const;
  /// C_g: sum of class scatters, without regularization.
  const Eigen::MatrixXd& pooled_scatter(Channel ch) const;
  double epsilon(Channel ch) const;

  /// Rebuilds a model from persisted statistics; pooled scatters are taken
  /// as given (not re-summed) so a saved model reproduces its scores exactly.
  static MapModel from_statistics(ColorMode mode, std::size_t k,
                                  std::vector<std::vector<ClassStatistics>> per_channel,
                                  std::vector<Eigen::MatrixXd> pooled,
                                  std::optional<double> epsilon_override);

 private:
  struct ChannelState {
    Channel channel = Channel::Y;
    std::vector<ClassStatistics> classes;
    Eigen::MatrixXd pooled;
    double epsilon = 0.0;
    Eigen::LLT<Eigen::MatrixXd> factor;
    Eigen::MatrixXd weights;  // k x c, column i = C^-1 mu_i
    Eigen::VectorXd bias;     // -0.5 mu_i . C^-1 mu_i
  };

  const ChannelState& state(Channel ch) const;
  void refresh(ChannelState& s) const;
  void check_samples(const ClassSamples& cls) const;

  ColorMode mode_ = ColorMode::grayscale;
  std::size_t k_ = 0;
  std::optional<double> epsilon_override_;
  std::vector<std::string> labels_;
  std::vector<ChannelState> channels_;
};

}  // namespace mapface
