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

#include "mapface/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mapface/error.hpp"
#include "mapface/io.hpp"
#include "mapface/random.hpp"

namespace mapface {
namespace {

// Smooth face support in [0, 1]: 1 inside the ellipse, fading to 0 outside.
Plane face_weight(int w, int h) {
  Plane p(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = (x + 0.5) / w - 0.5;
      const double v = (y + 0.5) / h - 0.5;
      const double r2 = (u * u) / 0.09 + (v * v) / 0.16;
      p(y, x) = 1.0 / (1.0 + std::exp(12.0 * (r2 - 1.0)));
    }
  }
  return p;
}

// Sum of a few random low-frequency cosines, scaled to unit RMS.
Plane class_pattern(int w, int h, Rng& rng) {
  Plane p = Plane::Zero(h, w);
  for (int term = 0; term < 6; ++term) {
    const double fu = static_cast<double>(1 + rng.below(4));
    const double fv = static_cast<double>(1 + rng.below(4));
    const double phase_u = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double phase_v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double amp = rng.normal();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        p(y, x) += amp * std::cos(std::numbers::pi * fu * (x + 0.5) / w + phase_u) *
                   std::cos(std::numbers::pi * fv * (y + 0.5) / h + phase_v);
      }
    }
  }
  const double rms = std::sqrt(p.squaredNorm() / static_cast<double>(p.size()));
  return rms > 0.0 ? Plane(p / rms) : p;
}

Plane quantize(const Plane& p) {
  return p.unaryExpr([](double v) { return std::clamp(std::round(v), 0.0, 255.0); });
}

}  // namespace

std::vector<LabeledImages> generate_faces(const SyntheticSpec& spec) {
  if (spec.classes == 0 || spec.images_per_class == 0 || spec.width < 1 || spec.height < 1) {
    throw Error(Errc::InvalidArgument, "synthetic", "empty synthetic corpus requested");
  }
  Rng rng(spec.seed);
  const Plane weight = face_weight(spec.width, spec.height);
  const Plane base = (50.0 + 100.0 * weight.array()).matrix();
  const double chroma_amp = spec.chroma_share * spec.signal;
  const double luma_amp = spec.luma_share * spec.signal;

  std::vector<LabeledImages> out;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    LabeledImages cls;
    char label[16];
    std::snprintf(label, sizeof(label), "c%03zu", c);
    cls.label = label;

    const Plane pattern = class_pattern(spec.width, spec.height, rng).cwiseProduct(weight) * luma_amp;
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double radius = std::sqrt(rng.uniform());
    const double skin_cb = 110.0 + chroma_amp * radius * std::cos(angle);
    const double skin_cr = 150.0 + chroma_amp * radius * std::sin(angle);

    for (std::size_t j = 0; j < spec.images_per_class; ++j) {
      const double light = rng.normal(0.0, spec.lighting);
      const double cb_skin = skin_cb + rng.normal(0.0, spec.chroma_jitter);
      const double cr_skin = skin_cr + rng.normal(0.0, spec.chroma_jitter);
      Plane y = base + pattern + class_pattern(spec.width, spec.height, rng).cwiseProduct(weight) * spec.pose;
      y.array() += light;
      Plane cb = (128.0 + (cb_skin - 128.0) * weight.array()).matrix();
      Plane cr = (128.0 + (cr_skin - 128.0) * weight.array()).matrix();
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        y.data()[i] += rng.normal(0.0, spec.pixel_noise);
        cb.data()[i] += rng.normal(0.0, spec.pixel_noise * 0.5);
        cr.data()[i] += rng.normal(0.0, spec.pixel_noise * 0.5);
      }
      RgbImage img = ycbcr_to_rgb(y, cb, cr);
      img.r = quantize(img.r);
      img.g = quantize(img.g);
      img.b = quantize(img.b);
      cls.images.push_back(std::move(img));
      char name[32];
      std::snprintf(name, sizeof(name), "%s/%02zu", label, j);
      cls.names.emplace_back(name);
    }
    out.push_back(std::move(cls));
  }
  return out;
}

void split_generated(const std::vector<LabeledImages>& all, std::size_t train_per_class,
                     std::vector<LabeledImages>& train, std::vector<LabeledImages>& test) {
  train.clear();
  test.clear();
  for (const auto& cls : all) {
    if (train_per_class >= cls.images.size()) {
      throw Error(Errc::ClassTooSmall, "synthetic", "class '" + cls.label + "' too small for split");
    }
    LabeledImages tr{cls.label, {}, {}};
    LabeledImages te{cls.label, {}, {}};
    for (std::size_t j = 0; j < cls.images.size(); ++j) {
      auto& dst = j < train_per_class ? tr : te;
      dst.images.push_back(cls.images[j]);
      dst.names.push_back(cls.names[j]);
    }
    train.push_back(std::move(tr));
    test.push_back(std::move(te));
  }
}

void write_dataset(const std::vector<LabeledImages>& classes, const std::filesystem::path& root) {
  for (const auto& cls : classes) {
    const auto dir = root / cls.label;
    ensure_directory(dir, "synthetic");
    for (std::size_t j = 0; j < cls.images.size(); ++j) {
      char name[16];
      std::snprintf(name, sizeof(name), "%02zu.ppm", j);
      save_image(dir / name, cls.images[j]);
    }
  }
}

}  // namespace mapface
