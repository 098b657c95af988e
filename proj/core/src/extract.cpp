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

#include "mapface/extract.hpp"

#include "mapface/classify.hpp"
#include "mapface/error.hpp"

namespace mapface {

std::vector<Plane> prepared_planes(const RgbImage& img, const ExtractionSpec& spec) {
  const RgbImage sized = resize(img, spec.width, spec.height);
  ChannelPlanes planes = prepare_channels(sized, spec.color_mode, {spec.equalize_chroma});
  std::vector<Plane> out;
  out.push_back(std::move(planes.y));
  if (spec.color_mode == ColorMode::ycbcr) {
    out.push_back(std::move(*planes.cb));
    out.push_back(std::move(*planes.cr));
  }
  return out;
}

void fit_masks(ExtractionSpec& spec, std::span<const RgbImage> training) {
  spec.masks.clear();
  if (spec.selection != SelectionMode::fixed_mask) return;
  if (training.empty()) {
    throw Error(Errc::DimensionMismatch, "features", "fixed mask needs training images");
  }
  const auto chans = channels_for(spec.color_mode);
  std::vector<std::vector<FrequencyMatrix>> coeffs(chans.size());
  for (const auto& img : training) {
    auto planes = prepared_planes(img, spec);
    for (std::size_t slot = 0; slot < chans.size(); ++slot) {
      coeffs[slot].push_back(dct_decompose(planes[slot]));
    }
  }
  for (std::size_t slot = 0; slot < chans.size(); ++slot) {
    spec.masks.push_back(build_fixed_mask(std::span<const FrequencyMatrix>(coeffs[slot]), spec.k));
  }
}

std::vector<FeatureVector> extract_features(const RgbImage& img, const ExtractionSpec& spec) {
  const auto chans = channels_for(spec.color_mode);
  if (spec.selection == SelectionMode::fixed_mask && spec.masks.size() != chans.size()) {
    throw Error(Errc::BadMask, "features", "fixed_mask selection without fitted masks");
  }
  const auto planes = prepared_planes(img, spec);
  std::vector<FeatureVector> out;
  out.reserve(chans.size());
  for (std::size_t slot = 0; slot < chans.size(); ++slot) {
    const auto freq = dct_decompose(planes[slot]);
    std::span<const std::size_t> mask;
    if (spec.selection == SelectionMode::fixed_mask) mask = spec.masks[slot];
    out.push_back(select_features(freq, spec.k, spec.selection, mask, chans[slot]));
  }
  return out;
}

}  // namespace mapface
