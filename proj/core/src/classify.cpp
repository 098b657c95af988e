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

#include "mapface/classify.hpp"

#include <algorithm>
#include <cmath>

#include "mapface/error.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "classify";

std::string dims(std::size_t got, std::size_t want) {
  return "got dimension " + std::to_string(got) + ", expected " + std::to_string(want);
}

}  // namespace

std::vector<Channel> channels_for(ColorMode mode) {
  if (mode == ColorMode::grayscale) return {Channel::Y};
  return {Channel::Y, Channel::Cb, Channel::Cr};
}

ClassStatistics ClassStatistics::from_samples(std::string label,
                                              std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) {
    throw Error(Errc::DimensionMismatch, kModule, "class '" + label + "' has no samples");
  }
  const Eigen::Index k = samples.front().size();
  Eigen::MatrixXd data(k, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].size() != k) {
      throw Error(Errc::DimensionMismatch, kModule,
                  "class '" + label + "': " + dims(samples[j].size(), k));
    }
    data.col(static_cast<Eigen::Index>(j)) = samples[j];
  }
  ClassStatistics s;
  s.label = std::move(label);
  s.count = samples.size();
  s.mean = data.rowwise().mean();
  const Eigen::MatrixXd centred = data.colwise() - s.mean;
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(k, k);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(centred);
  s.scatter = lower.selfadjointView<Eigen::Lower>();
  return s;
}

std::size_t argmax_lowest(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

double default_regularization(const Eigen::MatrixXd& pooled) {
  const double k = static_cast<double>(std::max<Eigen::Index>(pooled.rows(), 1));
  return std::max(1e-6 * pooled.trace() / k, 1e-10);
}

void MapModel::check_samples(const ClassSamples& cls) const {
  const auto expected = channels_.size();
  if (cls.per_channel.size() != expected) {
    throw Error(Errc::MissingChannel, kModule,
                "class '" + cls.label + "' supplies " + std::to_string(cls.per_channel.size()) +
                    " channel(s), model uses " + std::to_string(expected));
  }
  const std::size_t n = cls.per_channel.front().size();
  for (const auto& samples : cls.per_channel) {
    if (samples.empty() || samples.size() != n) {
      throw Error(Errc::DimensionMismatch, kModule,
                  "class '" + cls.label + "' has inconsistent sample counts across channels");
    }
    for (const auto& v : samples) {
      if (static_cast<std::size_t>(v.size()) != k_) {
        throw Error(Errc::DimensionMismatch, kModule,
                    "class '" + cls.label + "': " + dims(static_cast<std::size_t>(v.size()), k_));
      }
    }
  }
}

void MapModel::refresh(ChannelState& s) const {
  s.epsilon = epsilon_override_.value_or(default_regularization(s.pooled));
  Eigen::MatrixXd regularized = s.pooled;
  regularized.diagonal().array() += s.epsilon;
  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success || !std::isfinite(s.epsilon)) {
    throw Error(Errc::DegenerateCovariance, kModule,
                std::string("pooled covariance of channel ") + std::string(channel_name(s.channel)) +
                    " is not positive definite after regularization");
  }
  const auto c = static_cast<Eigen::Index>(s.classes.size());
  Eigen::MatrixXd means(static_cast<Eigen::Index>(k_), c);
  for (Eigen::Index i = 0; i < c; ++i) means.col(i) = s.classes[i].mean;
  s.weights = llt.solve(means);
  s.factor = std::move(llt);
  s.bias.resize(c);
  for (Eigen::Index i = 0; i < c; ++i) s.bias[i] = -0.5 * means.col(i).dot(s.weights.col(i));
  if (!s.weights.allFinite() || !s.bias.allFinite()) {
    throw Error(Errc::DegenerateCovariance, kModule, "non-finite discriminant weights");
  }
}

MapModel MapModel::train(std::span<const ClassSamples> classes, ColorMode mode,
                         std::optional<double> epsilon_override) {
  if (classes.empty()) throw Error(Errc::TooFewClasses, kModule, "training needs at least one class");
  if (epsilon_override && !(*epsilon_override > 0.0)) {
    throw Error(Errc::InvalidArgument, kModule, "epsilon override must be positive");
  }
  MapModel model;
  model.mode_ = mode;
  model.epsilon_override_ = epsilon_override;
  for (Channel ch : channels_for(mode)) model.channels_.push_back(ChannelState{ch, {}, {}, 0.0, {}, {}});

  const auto& first = classes.front();
  if (first.per_channel.empty() || first.per_channel.front().empty()) {
    throw Error(Errc::DimensionMismatch, kModule, "class '" + first.label + "' has no samples");
  }
  model.k_ = static_cast<std::size_t>(first.per_channel.front().front().size());
  if (model.k_ == 0) throw Error(Errc::DimensionMismatch, kModule, "feature dimension is zero");

  const auto k = static_cast<Eigen::Index>(model.k_);
  for (auto& s : model.channels_) s.pooled = Eigen::MatrixXd::Zero(k, k);

  for (const auto& cls : classes) {
    model.check_samples(cls);
    if (std::find(model.labels_.begin(), model.labels_.end(), cls.label) != model.labels_.end()) {
      throw Error(Errc::DuplicateLabel, kModule, "label '" + cls.label + "' appears twice");
    }
    model.labels_.push_back(cls.label);
    for (std::size_t slot = 0; slot < model.channels_.size(); ++slot) {
      auto& s = model.channels_[slot];
      s.classes.push_back(ClassStatistics::from_samples(cls.label, cls.per_channel[slot]));
      s.pooled += s.classes.back().scatter;
    }
  }
  for (auto& s : model.channels_) model.refresh(s);
  return model;
}

void MapModel::add_class(const ClassSamples& cls) {
  if (std::find(labels_.begin(), labels_.end(), cls.label) != labels_.end()) {
    throw Error(Errc::DuplicateLabel, kModule, "label '" + cls.label + "' already enrolled");
  }
  check_samples(cls);

  // Compute everything before mutating so a failure leaves the model intact.
  std::vector<ChannelState> updated = channels_;
  for (std::size_t slot = 0; slot < updated.size(); ++slot) {
    auto& s = updated[slot];
    s.classes.push_back(ClassStatistics::from_samples(cls.label, cls.per_channel[slot]));
    s.pooled += s.classes.back().scatter;
    refresh(s);
  }
  channels_ = std::move(updated);
  labels_.push_back(cls.label);
}

const MapModel::ChannelState& MapModel::state(Channel ch) const {
  for (const auto& s : channels_) {
    if (s.channel == ch) return s;
  }
  throw Error(Errc::MissingChannel, kModule,
              "model has no " + std::string(channel_name(ch)) + " channel");
}

double MapModel::discriminant(const Eigen::VectorXd& x, std::size_t class_index, Channel ch) const {
  const auto& s = state(ch);
  if (class_index >= labels_.size()) {
    throw Error(Errc::IndexOutOfRange, kModule,
                "class index " + std::to_string(class_index) + " >= " + std::to_string(labels_.size()));
  }
  if (static_cast<std::size_t>(x.size()) != k_) {
    throw Error(Errc::DimensionMismatch, kModule, dims(static_cast<std::size_t>(x.size()), k_));
  }
  const auto i = static_cast<Eigen::Index>(class_index);
  return s.weights.col(i).dot(x) + s.bias[i];
}

std::vector<double> MapModel::scores(const Eigen::VectorXd& x, Channel ch) const {
  std::vector<double> out(labels_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = discriminant(x, i, ch);
  return out;
}

double MapModel::quadratic_term(const Eigen::VectorXd& x, Channel ch) const {
  const auto& s = state(ch);
  if (static_cast<std::size_t>(x.size()) != k_) {
    throw Error(Errc::DimensionMismatch, kModule, dims(static_cast<std::size_t>(x.size()), k_));
  }
  const Eigen::VectorXd half = s.factor.matrixL().solve(x);
  return 0.5 * half.squaredNorm();
}

double MapModel::log_posterior(const Eigen::VectorXd& x, std::size_t class_index, Channel ch) const {
  return discriminant(x, class_index, ch) - quadratic_term(x, ch);
}

Decision MapModel::classify_channel(const Eigen::VectorXd& x, Channel ch) const {
  Decision d;
  d.scores = scores(x, ch);
  d.class_index = argmax_lowest(d.scores);
  const double q = quadratic_term(x, ch);
  d.similarity.reserve(d.scores.size());
  for (double g : d.scores) d.similarity.push_back(g - q);
  return d;
}

Decision MapModel::classify_fused(std::span<const FeatureVector> features) const {
  const auto chans = channels_for(ColorMode::ycbcr);
  Decision d;
  d.scores.assign(labels_.size(), 0.0);
  double quadratic = 0.0;
  for (Channel ch : chans) {
    const auto it = std::find_if(features.begin(), features.end(),
                                 [ch](const FeatureVector& f) { return f.channel == ch; });
    if (it == features.end()) {
      throw Error(Errc::MissingChannel, kModule,
                  "fusion needs a " + std::string(channel_name(ch)) + " feature vector");
    }
    const auto channel_scores = scores(it->values, ch);
    for (std::size_t i = 0; i < d.scores.size(); ++i) d.scores[i] += channel_scores[i];
    quadratic += quadratic_term(it->values, ch);
  }
  const auto n = static_cast<double>(chans.size());
  for (auto& v : d.scores) v /= n;
  d.class_index = argmax_lowest(d.scores);
  d.similarity.reserve(d.scores.size());
  for (double g : d.scores) d.similarity.push_back(g - quadratic / n);
  return d;
}

Decision MapModel::classify(std::span<const FeatureVector> features) const {
  if (mode_ == ColorMode::ycbcr) return classify_fused(features);
  const auto it = std::find_if(features.begin(), features.end(),
                               [](const FeatureVector& f) { return f.channel == Channel::Y; });
  if (it == features.end()) throw Error(Errc::MissingChannel, kModule, "no Y feature vector");
  return classify_channel(it->values, Channel::Y);
}

std::vector<Channel> MapModel::channels() const {
  std::vector<Channel> out;
  for (const auto& s : channels_) out.push_back(s.channel);
  return out;
}

const ClassStatistics& MapModel::class_statistics(Channel ch, std::size_t class_index) const {
  const auto& s = state(ch);
  if (class_index >= s.classes.size()) {
    throw Error(Errc::IndexOutOfRange, kModule, "class index " + std::to_string(class_index));
  }
  return s.classes[class_index];
}

const Eigen::MatrixXd& MapModel::pooled_scatter(Channel ch) const { return state(ch).pooled; }

double MapModel::epsilon(Channel ch) const { return state(ch).epsilon; }

MapModel MapModel::from_statistics(ColorMode mode, std::size_t k,
                                   std::vector<std::vector<ClassStatistics>> per_channel,
                                   std::vector<Eigen::MatrixXd> pooled,
                                   std::optional<double> epsilon_override) {
  const auto chans = channels_for(mode);
  if (per_channel.size() != chans.size() || pooled.size() != chans.size()) {
    throw Error(Errc::MissingChannel, kModule, "persisted channel count does not match colour mode");
  }
  MapModel model;
  model.mode_ = mode;
  model.k_ = k;
  model.epsilon_override_ = epsilon_override;
  for (const auto& st : per_channel.front()) model.labels_.push_back(st.label);
  if (model.labels_.empty()) throw Error(Errc::TooFewClasses, kModule, "model has no classes");
  for (std::size_t slot = 0; slot < chans.size(); ++slot) {
    if (per_channel[slot].size() != model.labels_.size()) {
      throw Error(Errc::DimensionMismatch, kModule, "class count differs between channels");
    }
    ChannelState s;
    s.channel = chans[slot];
    s.classes = std::move(per_channel[slot]);
    s.pooled = std::move(pooled[slot]);
    if (static_cast<std::size_t>(s.pooled.rows()) != k || static_cast<std::size_t>(s.pooled.cols()) != k) {
      throw Error(Errc::DimensionMismatch, kModule, "pooled scatter has wrong shape");
    }
    for (const auto& st : s.classes) {
      if (static_cast<std::size_t>(st.mean.size()) != k) {
        throw Error(Errc::DimensionMismatch, kModule, "class mean has wrong length");
      }
    }
    model.refresh(s);
    model.channels_.push_back(std::move(s));
  }
  return model;
}

}  // namespace mapface
