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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mapface/baselines.hpp"
#include "mapface/classify.hpp"
#include "mapface/extract.hpp"

namespace mapface {

/// A trained recognizer: the feature extraction it was trained with plus the
/// classifier (MAP, PCA or LDA).
struct ModelFile {
  ExtractionSpec extraction;
  std::variant<MapModel, BaselineModel> model;

  std::string kind_name() const;
  const std::vector<std::string>& labels() const;
  Decision classify(std::span<const FeatureVector> features) const;
};

inline constexpr std::uint16_t kModelFormatVersion = 1;

/// Binary container, all integers and doubles little-endian:
///
///   "MAPF" | u16 version | u8 kind | u64 payload length | payload | u32 CRC32
///
/// kind is 0 (map), 1 (pca) or 2 (lda); the CRC covers kind, length and
/// payload. The payload starts with the extraction header (size, colour mode,
/// k, selection mode, masks) and the class labels, followed by per-channel
/// row-major matrices.
std::vector<std::uint8_t> encode_model(const ModelFile& file);
ModelFile decode_model(std::span<const std::uint8_t> bytes);

void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Lossy tab-separated dump of class means for inspection. Not readable back.
std::string export_model_tsv(const ModelFile& file);

}  // namespace mapface
