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

#include "mapface/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mapface/error.hpp"
#include "mapface/io.hpp"

namespace mapface {
namespace {

constexpr std::string_view kModule = "classify";
constexpr std::uint8_t kMagic[4] = {'M', 'A', 'P', 'F'};
constexpr std::size_t kPrefix = 4 + 2;           // magic + version
constexpr std::size_t kHeader = kPrefix + 1 + 8;  // + kind + payload length

enum class Kind : std::uint8_t { map = 0, pca = 1, lda = 2 };

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void vec(const Eigen::VectorXd& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
  }
  void mat(const Eigen::MatrixXd& m) {
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  double f64() { return std::bit_cast<double>(get_le(8)); }
  std::string str() {
    const auto n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd vec() {
    const auto n = u32();
    need(static_cast<std::size_t>(n) * 8);
    Eigen::VectorXd v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = f64();
    return v;
  }
  Eigen::MatrixXd mat() {
    const auto rows = u32();
    const auto cols = u32();
    need(static_cast<std::size_t>(rows) * cols * 8);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = f64();
    }
    return m;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(Errc::CorruptFile, kModule, "model payload ends early");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void write_extraction(Writer& w, const ExtractionSpec& s) {
  w.u32(static_cast<std::uint32_t>(s.width));
  w.u32(static_cast<std::uint32_t>(s.height));
  w.u8(static_cast<std::uint8_t>(s.color_mode));
  w.u8(s.equalize_chroma ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(s.k));
  w.u8(static_cast<std::uint8_t>(s.selection));
  w.u8(static_cast<std::uint8_t>(s.masks.size()));
  for (const auto& mask : s.masks) {
    w.u32(static_cast<std::uint32_t>(mask.size()));
    for (auto idx : mask) w.u32(static_cast<std::uint32_t>(idx));
  }
}

ExtractionSpec read_extraction(Reader& r) {
  ExtractionSpec s;
  s.width = static_cast<int>(r.u32());
  s.height = static_cast<int>(r.u32());
  const auto mode = r.u8();
  if (mode > 1) throw Error(Errc::CorruptFile, kModule, "unknown colour mode tag");
  s.color_mode = static_cast<ColorMode>(mode);
  s.equalize_chroma = r.u8() != 0;
  s.k = r.u32();
  const auto sel = r.u8();
  if (sel > 1) throw Error(Errc::CorruptFile, kModule, "unknown selection mode tag");
  s.selection = static_cast<SelectionMode>(sel);
  const auto n_masks = r.u8();
  for (std::uint8_t i = 0; i < n_masks; ++i) {
    std::vector<std::size_t> mask(r.u32());
    for (auto& idx : mask) idx = r.u32();
    s.masks.push_back(std::move(mask));
  }
  if (s.width < 1 || s.height < 1 || s.k < 1) {
    throw Error(Errc::CorruptFile, kModule, "invalid extraction header");
  }
  return s;
}

void write_map(Writer& w, const MapModel& m) {
  const auto& labels = m.labels();
  w.u32(static_cast<std::uint32_t>(labels.size()));
  for (const auto& l : labels) w.str(l);
  const auto eps = m.epsilon_override();
  w.u8(eps ? 1 : 0);
  w.f64(eps.value_or(0.0));
  const auto chans = m.channels();
  w.u8(static_cast<std::uint8_t>(chans.size()));
  for (Channel ch : chans) {
    w.u8(static_cast<std::uint8_t>(ch));
    w.f64(m.epsilon(ch));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& st = m.class_statistics(ch, i);
      w.u64(st.count);
      w.vec(st.mean);
      w.mat(st.scatter);
    }
    w.mat(m.pooled_scatter(ch));
  }
}

MapModel read_map(Reader& r, const ExtractionSpec& spec) {
  std::vector<std::string> labels(r.u32());
  for (auto& l : labels) l = r.str();
  const bool has_eps = r.u8() != 0;
  const double eps = r.f64();
  const auto n_chans = r.u8();
  std::vector<std::vector<ClassStatistics>> per_channel;
  std::vector<Eigen::MatrixXd> pooled;
  for (std::uint8_t slot = 0; slot < n_chans; ++slot) {
    (void)r.u8();   // channel id, implied by slot order
    (void)r.f64();  // epsilon, recomputed on load
    std::vector<ClassStatistics> stats;
    for (const auto& label : labels) {
      ClassStatistics st;
      st.label = label;
      st.count = r.u64();
      st.mean = r.vec();
      st.scatter = r.mat();
      stats.push_back(std::move(st));
    }
    per_channel.push_back(std::move(stats));
    pooled.push_back(r.mat());
  }
  return MapModel::from_statistics(spec.color_mode, spec.k, std::move(per_channel), std::move(pooled),
                                   has_eps ? std::optional<double>(eps) : std::nullopt);
}

void write_projected(Writer& w, const std::vector<Eigen::VectorXd>& means) {
  w.u32(static_cast<std::uint32_t>(means.size()));
  for (const auto& v : means) w.vec(v);
}

std::vector<Eigen::VectorXd> read_projected(Reader& r) {
  std::vector<Eigen::VectorXd> means(r.u32());
  for (auto& v : means) v = r.vec();
  return means;
}

void write_baseline(Writer& w, const BaselineModel& m) {
  w.u32(static_cast<std::uint32_t>(m.labels().size()));
  for (const auto& l : m.labels()) w.str(l);
  w.u8(static_cast<std::uint8_t>(m.channel_models().size()));
  for (const auto& cm : m.channel_models()) {
    if (const auto* p = std::get_if<PcaModel>(&cm)) {
      w.vec(p->mean);
      w.mat(p->components);
      w.vec(p->eigenvalues);
      write_projected(w, p->class_means_projected);
    } else {
      const auto& l = std::get<LdaModel>(cm);
      w.vec(l.global_mean);
      w.mat(l.projection);
      w.vec(l.eigenvalues);
      write_projected(w, l.class_means_projected);
      w.mat(l.between_scatter);
      w.mat(l.within_scatter);
      w.f64(l.epsilon);
    }
  }
}

BaselineModel read_baseline(Reader& r, Kind kind, const ExtractionSpec& spec) {
  std::vector<std::string> labels(r.u32());
  for (auto& l : labels) l = r.str();
  const auto n = r.u8();
  std::vector<BaselineModel::ChannelModel> models;
  for (std::uint8_t slot = 0; slot < n; ++slot) {
    if (kind == Kind::pca) {
      PcaModel p;
      p.mean = r.vec();
      p.components = r.mat();
      p.eigenvalues = r.vec();
      p.class_means_projected = read_projected(r);
      models.emplace_back(std::move(p));
    } else {
      LdaModel l;
      l.global_mean = r.vec();
      l.projection = r.mat();
      l.eigenvalues = r.vec();
      l.class_means_projected = read_projected(r);
      l.between_scatter = r.mat();
      l.within_scatter = r.mat();
      l.epsilon = r.f64();
      models.emplace_back(std::move(l));
    }
  }
  return BaselineModel::from_parts(kind == Kind::pca ? BaselineKind::pca : BaselineKind::lda,
                                   spec.color_mode, spec.k, std::move(labels), std::move(models));
}

}  // namespace

std::string ModelFile::kind_name() const {
  if (std::holds_alternative<MapModel>(model)) return "map";
  return std::get<BaselineModel>(model).kind() == BaselineKind::pca ? "pca" : "lda";
}

const std::vector<std::string>& ModelFile::labels() const {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.labels(); }, model);
}

Decision ModelFile::classify(std::span<const FeatureVector> features) const {
  return std::visit([&](const auto& m) { return m.classify(features); }, model);
}

std::vector<std::uint8_t> encode_model(const ModelFile& file) {
  Writer payload;
  write_extraction(payload, file.extraction);
  Kind kind = Kind::map;
  if (const auto* map = std::get_if<MapModel>(&file.model)) {
    write_map(payload, *map);
  } else {
    const auto& b = std::get<BaselineModel>(file.model);
    kind = b.kind() == BaselineKind::pca ? Kind::pca : Kind::lda;
    write_baseline(payload, b);
  }

  Writer out;
  for (auto b : kMagic) out.u8(b);
  out.u16(kModelFormatVersion);
  out.u8(static_cast<std::uint8_t>(kind));
  out.u64(payload.bytes().size());
  auto& bytes = out.bytes();
  bytes.insert(bytes.end(), payload.bytes().begin(), payload.bytes().end());
  const auto crc = crc32(std::span<const std::uint8_t>(bytes).subspan(kPrefix));
  out.u32(crc);
  return std::move(out.bytes());
}

ModelFile decode_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPrefix) throw Error(Errc::ChecksumMismatch, kModule, "model file truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::CorruptFile, kModule, "not a model file (bad magic)");
  }
  const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kModelFormatVersion) {
    throw Error(Errc::VersionMismatch, kModule,
                "model format version " + std::to_string(version) + ", this build reads " +
                    std::to_string(kModelFormatVersion));
  }
  if (bytes.size() < kHeader + 4) throw Error(Errc::ChecksumMismatch, kModule, "model file truncated");
  Reader head(bytes.subspan(kPrefix, kHeader - kPrefix));
  const auto kind_tag = head.u8();
  const auto length = head.u64();
  if (length != bytes.size() - kHeader - 4) {
    throw Error(Errc::ChecksumMismatch, kModule, "payload length does not match file size");
  }
  const auto body = bytes.subspan(kPrefix, bytes.size() - kPrefix - 4);
  Reader tail(bytes.subspan(bytes.size() - 4));
  if (crc32(body) != tail.u32()) throw Error(Errc::ChecksumMismatch, kModule, "CRC32 mismatch");
  if (kind_tag > 2) throw Error(Errc::CorruptFile, kModule, "unknown model kind");

  Reader r(bytes.subspan(kHeader, static_cast<std::size_t>(length)));
  ModelFile file;
  file.extraction = read_extraction(r);
  const auto kind = static_cast<Kind>(kind_tag);
  if (kind == Kind::map) {
    file.model = read_map(r, file.extraction);
  } else {
    file.model = read_baseline(r, kind, file.extraction);
  }
  if (!r.done()) throw Error(Errc::CorruptFile, kModule, "trailing bytes in model payload");
  return file;
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
  write_file_atomic(path, encode_model(file), kModule);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, kModule, "cannot open model " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return decode_model(bytes);
}

std::string export_model_tsv(const ModelFile& file) {
  std::ostringstream os;
  os.precision(9);
  os << "kind\t" << file.kind_name() << '\n';
  os << "k\t" << file.extraction.k << '\n';
  os << "size\t" << file.extraction.width << 'x' << file.extraction.height << '\n';
  os << "color\t" << (file.extraction.color_mode == ColorMode::ycbcr ? "ycbcr" : "gray") << '\n';
  if (const auto* map = std::get_if<MapModel>(&file.model)) {
    os << "channel\tlabel\tcount\tmean...\n";
    for (Channel ch : map->channels()) {
      for (std::size_t i = 0; i < map->num_classes(); ++i) {
        const auto& st = map->class_statistics(ch, i);
        os << channel_name(ch) << '\t' << st.label << '\t' << st.count;
        for (Eigen::Index j = 0; j < st.mean.size(); ++j) os << '\t' << st.mean[j];
        os << '\n';
      }
      os << channel_name(ch) << "\tepsilon\t" << map->epsilon(ch) << '\n';
    }
  } else {
    const auto& b = std::get<BaselineModel>(file.model);
    os << "label\n";
    for (const auto& l : b.labels()) os << l << '\n';
  }
  return os.str();
}

}  // namespace mapface
