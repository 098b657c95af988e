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

#include "mapface/error.hpp"

namespace mapface {
namespace {

std::string format_message(Errc code, std::string_view module,
                           const std::string& detail) {
  std::string msg;
  msg.reserve(module.size() + detail.size() + 32);
  msg += '[';
  msg += module;
  msg += "] ";
  msg += errc_name(code);
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::UnreadableImage: return "UnreadableImage";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::EmptyPlane: return "EmptyPlane";
    case Errc::EmptySignal: return "EmptySignal";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::BadMask: return "BadMask";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateCovariance: return "DegenerateCovariance";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MissingChannel: return "MissingChannel";
    case Errc::TooFewClasses: return "TooFewClasses";
    case Errc::IoFailure: return "IoFailure";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::NoImpostors: return "NoImpostors";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

int exit_status(Errc code) noexcept {
  return code == Errc::IoFailure ? 3 : 2;
}

Error::Error(Errc code, std::string_view module, const std::string& detail)
    : std::runtime_error(format_message(code, module, detail)),
      code_(code),
      module_(module) {}

}  // namespace mapface
