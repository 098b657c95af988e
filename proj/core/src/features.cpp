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

#include "mapface/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mapface/error.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "features";

double basis(Eigen::Index j, Eigen::Index n, Eigen::Index len) {
  const double N = static_cast<double>(len);
  const double alpha = j == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
  return alpha * std::cos(std::numbers::pi * (2.0 * static_cast<double>(n) + 1.0) *
                          static_cast<double>(j) / (2.0 * N));
}

// Descending magnitude, ascending index on ties.
std::vector<std::size_t> rank_by_magnitude(const std::vector<double>& magnitude, std::size_t k) {
  std::vector<std::size_t> order(magnitude.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cmp = [&](std::size_t a, std::size_t b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] > magnitude[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
  order.resize(k);
  return order;
}

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> flat(static_cast<std::size_t>(m.size()));
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat[i++] = m(r, c);
  }
  return flat;
}

}  // namespace

std::string_view channel_name(Channel ch) noexcept {
  switch (ch) {
    case Channel::Y: return "Y";
    case Channel::Cb: return "Cb";
    case Channel::Cr: return "Cr";
  }
  return "?";
}

std::vector<double> dct1d(std::span<const double> signal) {
  if (signal.empty()) throw Error(Errc::EmptySignal, kModule, "dct1d of an empty signal");
  const auto len = static_cast<Eigen::Index>(signal.size());
  std::vector<double> out(signal.size());
  for (Eigen::Index j = 0; j < len; ++j) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < len; ++n) acc += signal[n] * basis(j, n, len);
    out[j] = acc;
  }
  return out;
}

std::vector<double> idct1d(std::span<const double> coeffs) {
  if (coeffs.empty()) throw Error(Errc::EmptySignal, kModule, "idct1d of an empty signal");
  const auto len = static_cast<Eigen::Index>(coeffs.size());
  std::vector<double> out(coeffs.size());
  for (Eigen::Index n = 0; n < len; ++n) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) acc += coeffs[j] * basis(j, n, len);
    out[n] = acc;
  }
  return out;
}

Eigen::MatrixXd dct_matrix(Eigen::Index n) {
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) d(j, i) = basis(j, i, n);
  }
  return d;
}

FrequencyMatrix dct_decompose(const Plane& plane) {
  if (plane.rows() < 1 || plane.cols() < 1) {
    throw Error(Errc::EmptyPlane, kModule, "dct_decompose of an empty plane");
  }
  // Row pass transforms every row (right-multiply by the column-length basis),
  // column pass transforms every column of that result.
  const Eigen::MatrixXd row_basis = dct_matrix(plane.cols());
  const Eigen::MatrixXd col_basis = dct_matrix(plane.rows());
  Eigen::MatrixXd rows_done = plane * row_basis.transpose();
  return {col_basis * rows_done};
}

FeatureVector select_features(const FrequencyMatrix& freq, std::size_t k, SelectionMode mode,
                              std::span<const std::size_t> mask, Channel channel) {
  const auto total = static_cast<std::size_t>(freq.coeffs.size());
  if (k < 1 || k > total) {
    throw Error(Errc::KTooLarge, kModule,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(total) + "]");
  }
  const std::vector<double> flat = row_major(freq.coeffs);
  FeatureVector fv;
  fv.channel = channel;
  fv.mode = mode;
  fv.values.resize(static_cast<Eigen::Index>(k));

  if (mode == SelectionMode::per_image_sort) {
    std::vector<double> magnitude(flat.size());
    std::transform(flat.begin(), flat.end(), magnitude.begin(), [](double v) { return std::abs(v); });
    const auto order = rank_by_magnitude(magnitude, k);
    for (std::size_t i = 0; i < k; ++i) fv.values[static_cast<Eigen::Index>(i)] = flat[order[i]];
    return fv;
  }

  if (mask.size() != k) {
    throw Error(Errc::BadMask, kModule,
                "mask has " + std::to_string(mask.size()) + " entries, expected " + std::to_string(k));
  }
  std::vector<bool> seen(total, false);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = mask[i];
    if (idx >= total) throw Error(Errc::BadMask, kModule, "mask index " + std::to_string(idx) + " out of range");
    if (seen[idx]) throw Error(Errc::BadMask, kModule, "duplicate mask index " + std::to_string(idx));
    seen[idx] = true;
    fv.values[static_cast<Eigen::Index>(i)] = flat[idx];
  }
  return fv;
}

std::vector<std::size_t> build_fixed_mask(std::span<const FrequencyMatrix> training_coeffs,
                                          std::size_t k) {
  if (training_coeffs.empty()) {
    throw Error(Errc::DimensionMismatch, kModule, "fixed mask needs at least one training plane");
  }
  const Eigen::Index rows = training_coeffs.front().coeffs.rows();
  const Eigen::Index cols = training_coeffs.front().coeffs.cols();
  Eigen::MatrixXd mean_abs = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& f : training_coeffs) {
    if (f.coeffs.rows() != rows || f.coeffs.cols() != cols) {
      throw Error(Errc::DimensionMismatch, kModule, "training planes differ in size");
    }
    mean_abs += f.coeffs.cwiseAbs();
  }
  mean_abs /= static_cast<double>(training_coeffs.size());
  const auto total = static_cast<std::size_t>(mean_abs.size());
  if (k < 1 || k > total) {
    throw Error(Errc::KTooLarge, kModule,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(total) + "]");
  }
  return rank_by_magnitude(row_major(mean_abs), k);
}

std::vector<std::size_t> build_fixed_mask(std::span<const Plane> training_planes, std::size_t k) {
  std::vector<FrequencyMatrix> coeffs;
  coeffs.reserve(training_planes.size());
  for (const auto& p : training_planes) coeffs.push_back(dct_decompose(p));
  return build_fixed_mask(std::span<const FrequencyMatrix>(coeffs), k);
}

}  // namespace mapface
