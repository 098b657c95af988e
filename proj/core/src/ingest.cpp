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

#include "mapface/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mapface/error.hpp"
#include "mapface/log.hpp"
#include "mapface/random.hpp"

namespace mapface {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kModule = "ingest";

class PnmReader {
 public:
  PnmReader(std::vector<unsigned char> bytes, std::string name)
      : bytes_(std::move(bytes)), name_(std::move(name)) {}

  RgbImage decode() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      throw Error(Errc::UnsupportedFormat, kModule, name_ + ": not a PNM file");
    }
    const char kind = static_cast<char>(bytes_[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
      throw Error(Errc::UnsupportedFormat, kModule,
                  name_ + ": unsupported PNM variant P" + std::string(1, kind));
    }
    pos_ = 2;
    const bool color = kind == '3' || kind == '6';
    const bool binary = kind == '5' || kind == '6';

    const long w = header_int();
    const long h = header_int();
    const long maxval = header_int();
    if (w <= 0 || h <= 0) corrupt("zero or negative dimensions");
    if (maxval <= 0 || maxval > 65535) corrupt("maxval out of range");
    if (w > (1L << 15) || h > (1L << 15)) corrupt("dimensions too large");

    const int channels = color ? 3 : 1;
    const std::size_t samples = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
    std::vector<long> raw(samples);
    if (binary) {
      // Exactly one whitespace byte separates the header from the raster.
      if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) corrupt("missing raster separator");
      ++pos_;
      const std::size_t width = maxval < 256 ? 1 : 2;
      if (bytes_.size() - pos_ < samples * width) corrupt("truncated raster");
      for (std::size_t i = 0; i < samples; ++i) {
        long v = bytes_[pos_++];
        if (width == 2) v = (v << 8) | bytes_[pos_++];
        raw[i] = v;
      }
    } else {
      for (auto& v : raw) v = raster_int();
    }

    const double scale = 255.0 / static_cast<double>(maxval);
    RgbImage img{Plane(h, w), Plane(h, w), Plane(h, w)};
    std::size_t i = 0;
    for (long y = 0; y < h; ++y) {
      for (long x = 0; x < w; ++x) {
        if (color) {
          img.r(y, x) = sample(raw[i++], maxval) * scale;
          img.g(y, x) = sample(raw[i++], maxval) * scale;
          img.b(y, x) = sample(raw[i++], maxval) * scale;
        } else {
          const double v = sample(raw[i++], maxval) * scale;
          img.r(y, x) = v;
          img.g(y, x) = v;
          img.b(y, x) = v;
        }
      }
    }
    return img;
  }

 private:
  [[noreturn]] void corrupt(const std::string& why) const {
    throw Error(Errc::CorruptFile, kModule, name_ + ": " + why);
  }

  double sample(long v, long maxval) const {
    if (v < 0 || v > maxval) corrupt("sample exceeds maxval");
    return static_cast<double>(v);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) corrupt("unexpected end of file");
    if (!std::isdigit(bytes_[pos_])) corrupt("expected an integer");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > (1L << 30)) corrupt("integer overflow");
      ++pos_;
    }
    return v;
  }

  long header_int() { return read_int(); }
  long raster_int() { return read_int(); }

  std::vector<unsigned char> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, kModule, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::clamp(std::round(v), 0.0, 255.0));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

RgbImage load_image(const fs::path& path) {
  return PnmReader(read_file(path), path.string()).decode();
}

void save_image(const fs::path& path, const RgbImage& img, bool gray) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoFailure, kModule, "cannot write " + path.string());
  out << (gray ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raster;
  raster.reserve(static_cast<std::size_t>(img.width()) * img.height() * (gray ? 1 : 3));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      raster.push_back(to_byte(img.r(y, x)));
      if (!gray) {
        raster.push_back(to_byte(img.g(y, x)));
        raster.push_back(to_byte(img.b(y, x)));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw Error(Errc::IoFailure, kModule, "short write to " + path.string());
}

Plane resize_plane(const Plane& plane, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) {
    throw Error(Errc::ZeroDimension, kModule, "target size must be at least 1x1");
  }
  if (plane.size() == 0) throw Error(Errc::ZeroDimension, kModule, "empty source image");
  const Eigen::Index src_h = plane.rows();
  const Eigen::Index src_w = plane.cols();
  if (src_w == target_w && src_h == target_h) return plane;

  // Source coordinate of each destination sample, half-pixel aligned.
  auto axis = [](Eigen::Index src, int dst) {
    std::vector<std::pair<Eigen::Index, double>> taps(dst);
    const double step = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double s = (i + 0.5) * step - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      auto i0 = static_cast<Eigen::Index>(std::floor(s));
      if (i0 >= src - 1) i0 = std::max<Eigen::Index>(src - 2, 0);
      taps[i] = {i0, src == 1 ? 0.0 : s - static_cast<double>(i0)};
    }
    return taps;
  };
  const auto xs = axis(src_w, target_w);
  const auto ys = axis(src_h, target_h);

  Plane out(target_h, target_w);
  for (int y = 0; y < target_h; ++y) {
    const auto [y0, fy] = ys[y];
    const Eigen::Index y1 = std::min(y0 + 1, src_h - 1);
    for (int x = 0; x < target_w; ++x) {
      const auto [x0, fx] = xs[x];
      const Eigen::Index x1 = std::min(x0 + 1, src_w - 1);
      const double top = (1.0 - fx) * plane(y0, x0) + fx * plane(y0, x1);
      const double bottom = (1.0 - fx) * plane(y1, x0) + fx * plane(y1, x1);
      out(y, x) = std::clamp((1.0 - fy) * top + fy * bottom, 0.0, 255.0);
    }
  }
  return out;
}

RgbImage resize(const RgbImage& img, int target_w, int target_h) {
  return {resize_plane(img.r, target_w, target_h), resize_plane(img.g, target_w, target_h),
          resize_plane(img.b, target_w, target_h)};
}

bool has_image_extension(const fs::path& path) {
  const auto ext = lower(path.extension().string());
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(Errc::EmptyDataset, kModule, dir.string() + " is not a directory");
  }
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (has_image_extension(entry.path())) {
      images.push_back(entry.path());
    } else {
      log_warning(kModule, "ignoring non-image file " + entry.path().string());
    }
  }
  std::sort(images.begin(), images.end());
  return images;
}

std::size_t SplitSpec::train_count(std::size_t n, const std::string& label) const {
  std::size_t count = 0;
  if (const auto* fixed = std::get_if<std::size_t>(&spec_)) {
    if (*fixed == 0) throw Error(Errc::InvalidArgument, kModule, "train count must be >= 1");
    count = *fixed;
  } else {
    const double fraction = std::get<double>(spec_);
    if (!(fraction > 0.0 && fraction < 1.0)) {
      throw Error(Errc::InvalidArgument, kModule, "train ratio must lie in (0, 1)");
    }
    count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * n)));
    if (n >= 2) count = std::min(count, n - 1);
  }
  if (count >= n) {
    throw Error(Errc::ClassTooSmall, kModule,
                "class '" + label + "' has " + std::to_string(n) + " image(s), cannot hold out a test image under split " + describe());
  }
  return count;
}

std::string SplitSpec::describe() const {
  if (const auto* fixed = std::get_if<std::size_t>(&spec_)) {
    return std::to_string(*fixed) + " train per class";
  }
  std::ostringstream os;
  os << "train ratio " << std::get<double>(spec_);
  return os.str();
}

std::vector<fs::path> ClassEntry::paths(Split which) const {
  std::vector<fs::path> out;
  for (const auto& e : images) {
    if (e.split == which) out.push_back(e.path);
  }
  return out;
}

std::size_t DatasetIndex::count(Split which) const {
  std::size_t n = 0;
  for (const auto& c : classes) {
    n += static_cast<std::size_t>(std::count_if(
        c.images.begin(), c.images.end(), [which](const ImageEntry& e) { return e.split == which; }));
  }
  return n;
}

std::size_t DatasetIndex::total() const {
  std::size_t n = 0;
  for (const auto& c : classes) n += c.images.size();
  return n;
}

DatasetIndex scan_dataset(const fs::path& root, const SplitSpec& split, std::uint64_t seed) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(Errc::EmptyDataset, kModule, "dataset root " + root.string() + " does not exist");
  }
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      class_dirs.push_back(entry.path());
    } else {
      log_warning(kModule, "ignoring non-directory " + entry.path().string());
    }
  }
  if (class_dirs.empty()) {
    throw Error(Errc::EmptyDataset, kModule, "no class directories under " + root.string());
  }
  std::sort(class_dirs.begin(), class_dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  DatasetIndex index;
  for (const auto& dir : class_dirs) {
    ClassEntry cls;
    cls.label = dir.filename().string();
    const auto paths = list_images(dir);
    for (const auto& p : paths) {
      try {
        (void)load_image(p);
      } catch (const Error& e) {
        throw Error(Errc::UnreadableImage, kModule, p.string() + " (" + e.what() + ")");
      }
    }
    const std::size_t n_train = split.train_count(paths.size(), cls.label);

    std::vector<std::size_t> order(paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed ^ Rng::hash(cls.label));
    rng.shuffle(order.begin(), order.end());

    std::vector<Split> tags(paths.size(), Split::test);
    for (std::size_t i = 0; i < n_train; ++i) tags[order[i]] = Split::train;
    for (std::size_t i = 0; i < paths.size(); ++i) cls.images.push_back({paths[i], tags[i]});
    index.classes.push_back(std::move(cls));
  }
  return index;
}

}  // namespace mapface
