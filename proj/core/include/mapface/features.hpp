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
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mapface/ingest.hpp"

namespace mapface {

enum class Channel : std::uint8_t { Y = 0, Cb = 1, Cr = 2 };

std::string_view channel_name(Channel ch) noexcept;

enum class SelectionMode : std::uint8_t { per_image_sort = 0, fixed_mask = 1 };

/// Orthonormal DCT-II:
///   X_j = a(j) * sum_n x_n cos(pi (2n+1) j / 2N),  a(0) = sqrt(1/N), a(j>0) = sqrt(2/N)
std::vector<double> dct1d(std::span<const double> signal);

/// Inverse of dct1d (orthonormal DCT-III).
std::vector<double> idct1d(std::span<const double> coeffs);

/// N x N orthonormal DCT-II matrix; row j holds the j-th basis vector.
Eigen::MatrixXd dct_matrix(Eigen::Index n);

/// Whole-plane (non-blocked) 2-D DCT coefficients, same shape as the source.
struct FrequencyMatrix {
  Eigen::MatrixXd coeffs;
};

/// 1-D DCT over every row, then over every column of the result.
FrequencyMatrix dct_decompose(const Plane& plane);

/// Selected coefficients for one channel of one image.
struct FeatureVector {
  Eigen::VectorXd values;
  Channel channel = Channel::Y;
  SelectionMode mode = SelectionMode::per_image_sort;

  std::size_t k() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// Flat (row-major) index helpers for masks.
inline std::size_t flat_index(Eigen::Index row, Eigen::Index col, Eigen::Index cols) {
  return static_cast<std::size_t>(row * cols + col);
}

/// per_image_sort: flatten row-major, order by descending magnitude (ties by
/// ascending flat index) and keep the first k signed values.
/// fixed_mask: gather the signed values at mask positions, in mask order.
FeatureVector select_features(const FrequencyMatrix& freq, std::size_t k, SelectionMode mode,
                              std::span<const std::size_t> mask = {}, Channel channel = Channel::Y);

/// Flat indices of the k largest mean |DCT| coefficients over a training set,
/// in descending mean-magnitude order (ties by ascending index).
std::vector<std::size_t> build_fixed_mask(std::span<const Plane> training_planes, std::size_t k);

/// Same, from precomputed coefficient matrices.
std::vector<std::size_t> build_fixed_mask(std::span<const FrequencyMatrix> training_coeffs,
                                          std::size_t k);

}  // namespace mapface
