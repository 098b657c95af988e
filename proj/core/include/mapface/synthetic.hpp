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
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mapface/pipeline.hpp"

namespace mapface {

/// Parameters of the synthetic colour face corpus.
///
/// Every image shows an elliptical face over a neutral background. A class
/// adds a low-frequency luminance pattern of RMS luma_share * signal inside the
/// face and moves the skin tone (Cb, Cr inside the face) by a random offset of
/// magnitude up to chroma_share * signal. Each image then receives a pose
/// pattern (fresh low-frequency luminance of RMS pose), an illumination offset,
/// skin-tone jitter and per-pixel Gaussian noise before conversion to 8-bit RGB.
struct SyntheticSpec {
  std::size_t classes = 20;
  std::size_t images_per_class = 10;
  int width = 32;
  int height = 32;
  double signal = 40.0;
  double chroma_share = 0.7;
  double luma_share = 0.3;
  double pose = 4.0;
  double pixel_noise = 10.0;
  double lighting = 25.0;
  double chroma_jitter = 5.0;
  std::uint64_t seed = 1;
};

/// Labels are "c000", "c001", ...; images are deterministic in spec.seed.
std::vector<LabeledImages> generate_faces(const SyntheticSpec& spec);

/// First train_per_class images of each class to train, the rest to test.
void split_generated(const std::vector<LabeledImages>& all, std::size_t train_per_class,
                     std::vector<LabeledImages>& train, std::vector<LabeledImages>& test);

/// Writes <root>/<label>/<nn>.ppm for every generated image.
void write_dataset(const std::vector<LabeledImages>& classes, const std::filesystem::path& root);

}  // namespace mapface
