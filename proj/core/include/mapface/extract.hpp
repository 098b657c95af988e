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
#include <vector>

#include "mapface/features.hpp"
#include "mapface/ingest.hpp"
#include "mapface/preprocess.hpp"

namespace mapface {

/// Everything needed to turn a decoded image into per-channel feature
/// vectors: canonical size, colour handling, k and coefficient selection.
struct ExtractionSpec {
  int width = 128;
  int height = 128;
  ColorMode color_mode = ColorMode::ycbcr;
  bool equalize_chroma = false;
  std::size_t k = 64;
  SelectionMode selection = SelectionMode::per_image_sort;
  /// One mask per channel slot; filled by fit_masks in fixed_mask mode.
  std::vector<std::vector<std::size_t>> masks;

  bool operator==(const ExtractionSpec&) const = default;
};

/// Resize to the canonical size, then colour transform and equalization.
/// Returned planes are ordered as channels_for(color_mode).
std::vector<Plane> prepared_planes(const RgbImage& img, const ExtractionSpec& spec);

/// Builds per-channel fixed masks from training images (no-op in
/// per_image_sort mode).
void fit_masks(ExtractionSpec& spec, std::span<const RgbImage> training);

std::vector<FeatureVector> extract_features(const RgbImage& img, const ExtractionSpec& spec);

}  // namespace mapface
