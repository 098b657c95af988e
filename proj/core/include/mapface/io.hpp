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
#include <string_view>

namespace mapface {

/// Writes to a sibling temporary file and renames it over path.
/// Throws Error(IoFailure) naming module on any failure.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes,
                       std::string_view module);
void write_file_atomic(const std::filesystem::path& path, std::string_view text,
                       std::string_view module);

/// Creates dir (and parents) or throws IoFailure.
void ensure_directory(const std::filesystem::path& dir, std::string_view module);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace mapface
