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
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace mapface {

/// One real-valued image channel. Rows index y (height), columns index x (width).
using Plane = Eigen::MatrixXd;

/// Decoded colour image; all three planes share dimensions and hold values in [0, 255].
struct RgbImage {
  Plane r;
  Plane g;
  Plane b;

  static RgbImage from_gray(const Plane& gray) { return {gray, gray, gray}; }

  int width() const noexcept { return static_cast<int>(r.cols()); }
  int height() const noexcept { return static_cast<int>(r.rows()); }
  bool is_gray() const { return r == g && g == b; }
};

/// Decodes a PGM or PPM file (P2, P3, P5, P6; maxval up to 65535).
/// Samples are rescaled to [0, 255]; grayscale files yield r = g = b.
RgbImage load_image(const std::filesystem::path& path);

/// Writes a binary PGM (when gray is true, from the r plane) or PPM.
/// Values are rounded and clamped to 8 bits.
void save_image(const std::filesystem::path& path, const RgbImage& img, bool gray = false);

/// Bilinear resampling with pixel-centre alignment and edge clamping.
/// Resizing to the current size returns the input unchanged.
Plane resize_plane(const Plane& plane, int target_w, int target_h);
RgbImage resize(const RgbImage& img, int target_w, int target_h);

/// True for file extensions the loader understands (.pgm, .ppm, .pnm).
bool has_image_extension(const std::filesystem::path& path);

/// Image files directly inside dir, sorted by filename. Other files are
/// skipped with a warning.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Either a fixed per-class training count or a fraction of each class.
class SplitSpec {
 public:
  static SplitSpec per_class(std::size_t count) { return SplitSpec(count); }
  static SplitSpec ratio(double fraction) { return SplitSpec(fraction); }

  /// Training images to draw from a class of n images; throws ClassTooSmall
  /// when the class cannot keep at least one training and one test image.
  std::size_t train_count(std::size_t n, const std::string& label) const;

  std::string describe() const;

 private:
  explicit SplitSpec(std::variant<std::size_t, double> v) : spec_(v) {}
  std::variant<std::size_t, double> spec_;
};

enum class Split : std::uint8_t { train, test };

struct ImageEntry {
  std::filesystem::path path;
  Split split;
};

struct ClassEntry {
  std::string label;
  std::vector<ImageEntry> images;  // sorted by path

  std::vector<std::filesystem::path> paths(Split which) const;
};

/// Class-per-directory corpus with a stratified train/test assignment.
/// Class order (lexicographic by label) defines the class index downstream.
struct DatasetIndex {
  std::vector<ClassEntry> classes;

  std::size_t count(Split which) const;
  std::size_t total() const;
};

/// Scans root/<label>/<images>. Every image is decoded once to validate it.
/// The per-class shuffle is seeded from (seed, label), so a class's split does
/// not depend on which other classes are present.
DatasetIndex scan_dataset(const std::filesystem::path& root, const SplitSpec& split,
                          std::uint64_t seed);

}  // namespace mapface
