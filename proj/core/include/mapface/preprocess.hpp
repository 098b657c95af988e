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

#include <optional>

#include "mapface/ingest.hpp"

namespace mapface {

enum class ColorMode : std::uint8_t { grayscale = 0, ycbcr = 1 };

/// Channel planes handed to feature extraction. In grayscale mode only y is
/// populated; in ycbcr mode all three planes share dimensions.
struct ChannelPlanes {
  ColorMode mode = ColorMode::grayscale;
  Plane y;
  std::optional<Plane> cb;
  std::optional<Plane> cr;
};

struct PrepareOptions {
  /// Also equalize Cb and Cr. Off by default: lighting lives in luminance.
  bool equalize_chroma = false;
};

/// Full-range (JFIF) conversion, clamped to [0, 255].
ChannelPlanes rgb_to_ycbcr(const RgbImage& img);

/// Inverse of the full-range transform, unclamped. Used by tests and the
/// synthetic generator.
RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr);

/// Luma with the same weights as rgb_to_ycbcr.
Plane luma(const RgbImage& img);

/// Histogram equalization over 256 bins:
///   v' = round(255 * (cdf(v) - cdf_min) / (N - cdf_min))
/// Planes with a single occupied bin are returned unchanged.
Plane equalize(const Plane& plane);

/// Colour transform followed by luminance equalization.
ChannelPlanes prepare_channels(const RgbImage& img, ColorMode mode, PrepareOptions options = {});

}  // namespace mapface
