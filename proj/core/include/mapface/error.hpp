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

#include <stdexcept>
#include <string>
#include <string_view>

namespace mapface {

enum class Errc {
  // ingest
  EmptyDataset,
  ClassTooSmall,
  UnreadableImage,
  UnsupportedFormat,
  CorruptFile,
  ZeroDimension,
  // preprocess / features
  EmptyPlane,
  EmptySignal,
  KTooLarge,
  BadMask,
  // classify / baselines
  DimensionMismatch,
  DegenerateCovariance,
  DuplicateLabel,
  IndexOutOfRange,
  MissingChannel,
  TooFewClasses,
  // persistence
  IoFailure,
  VersionMismatch,
  ChecksumMismatch,
  // eval
  EmptyMatrix,
  NoImpostors,
  // configuration and cross-module contracts
  InvalidArgument,
  ConfigMismatch,
  Unsupported,
};

std::string_view errc_name(Errc code) noexcept;

/// Process exit status for an error: 3 for I/O failures, 2 for everything else.
int exit_status(Errc code) noexcept;

/// Exception carrying a machine-readable code and the name of the module that
/// raised it. what() reads "[module] Code: detail".
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string_view module, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  Errc code_;
  std::string module_;
};

}  // namespace mapface
