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

#include "mapface/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mapface/error.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "preprocess";

Plane clamp255(Plane p) { return p.cwiseMax(0.0).cwiseMin(255.0); }

}  // namespace

Plane luma(const RgbImage& img) {
  return clamp255(0.299 * img.r + 0.587 * img.g + 0.114 * img.b);
}

ChannelPlanes rgb_to_ycbcr(const RgbImage& img) {
  ChannelPlanes out;
  out.mode = ColorMode::ycbcr;
  out.y = luma(img);
  out.cb = clamp255((128.0 - 0.168736 * img.r.array() - 0.331264 * img.g.array() + 0.5 * img.b.array()).matrix());
  out.cr = clamp255((128.0 + 0.5 * img.r.array() - 0.418688 * img.g.array() - 0.081312 * img.b.array()).matrix());
  return out;
}

RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr) {
  const auto db = (cb.array() - 128.0);
  const auto dr = (cr.array() - 128.0);
  RgbImage img;
  img.r = (y.array() + 1.402 * dr).matrix();
  img.g = (y.array() - 0.344136 * db - 0.714136 * dr).matrix();
  img.b = (y.array() + 1.772 * db).matrix();
  return img;
}

Plane equalize(const Plane& plane) {
  if (plane.size() == 0) throw Error(Errc::EmptyPlane, kModule, "cannot equalize an empty plane");

  auto bin_of = [](double v) {
    return static_cast<int>(std::clamp(std::round(v), 0.0, 255.0));
  };
  std::array<long, 256> hist{};
  for (Eigen::Index i = 0; i < plane.size(); ++i) ++hist[bin_of(plane.data()[i])];

  std::array<long, 256> cdf{};
  long running = 0;
  long cdf_min = 0;
  int occupied = 0;
  for (int b = 0; b < 256; ++b) {
    running += hist[b];
    cdf[b] = running;
    if (hist[b] > 0) {
      if (occupied == 0) cdf_min = running;
      ++occupied;
    }
  }
  if (occupied <= 1) return plane;

  const double denom = static_cast<double>(plane.size() - cdf_min);
  std::array<double, 256> lut{};
  for (int b = 0; b < 256; ++b) {
    lut[b] = std::round(255.0 * static_cast<double>(cdf[b] - cdf_min) / denom);
    if (lut[b] < 0.0) lut[b] = 0.0;
  }
  Plane out(plane.rows(), plane.cols());
  for (Eigen::Index i = 0; i < plane.size(); ++i) out.data()[i] = lut[bin_of(plane.data()[i])];
  return out;
}

ChannelPlanes prepare_channels(const RgbImage& img, ColorMode mode, PrepareOptions options) {
  if (mode == ColorMode::grayscale) {
    ChannelPlanes out;
    out.mode = ColorMode::grayscale;
    out.y = equalize(luma(img));
    return out;
  }
  ChannelPlanes out = rgb_to_ycbcr(img);
  out.y = equalize(out.y);
  if (options.equalize_chroma) {
    out.cb = equalize(*out.cb);
    out.cr = equalize(*out.cr);
  }
  return out;
}

}  // namespace mapface
