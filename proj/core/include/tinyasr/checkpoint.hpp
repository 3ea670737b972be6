// Copyright (c) 2026 The tinyasr Authors. All Rights Reserved.
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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tinyasr/config.hpp"
#include "tinyasr/error.hpp"

namespace tinyasr {

enum class CheckpointErrc {
  kIo,
  kTruncated,
  kMalformedHeader,
  kBadLayout,
  kUnknownDtype,
  kDuplicateName,
  kShapeMismatch,
  kMissingTensor,
};

using CheckpointError = CodedError<CheckpointErrc>;

enum class DType { kF32 };

struct TensorRecord {
  std::string name;
  DType dtype = DType::kF32;
  std::vector<std::int64_t> shape;
  std::vector<float> data;  // row-major

  std::int64_t numel() const;
  bool operator==(const TensorRecord&) const = default;
};

/// Named tensors in insertion order plus string metadata.
///
/// On-disk layout:
///   u64 little-endian N
///   N bytes of UTF-8 JSON:
///     {"__metadata__": {k: v, ...},
///      "<name>": {"dtype": "f32", "shape": [...], "offset": o, "length": l}, ...}
///   payload: raw little-endian f32 data, tensor extents contiguous in order.
/// Offsets are relative to the start of the payload.
class TensorStore {
 public:
  /// Throws CheckpointError(kDuplicateName) or kShapeMismatch.
  void add(TensorRecord record);

  const TensorRecord* find(const std::string& name) const;
  /// Throws CheckpointError(kMissingTensor).
  const TensorRecord& at(const std::string& name) const;

  const std::vector<TensorRecord>& tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }
  std::int64_t total_elements() const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  bool operator==(const TensorStore& other) const {
    return tensors_ == other.tensors_ && metadata_ == other.metadata_;
  }

 private:
  std::vector<TensorRecord> tensors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::string> metadata_;
};

std::vector<std::uint8_t> serialize(const TensorStore& store);
TensorStore deserialize(const std::vector<std::uint8_t>& bytes);

void save(const TensorStore& store, const std::filesystem::path& path);
TensorStore load(const std::filesystem::path& path);

/// One tensor per entry of parameter_layout(config), uniform in
/// [-0.05, 0.05], each drawn from a counter stream keyed by (seed, name).
/// Metadata carries "config".
TensorStore init_random(const ModelConfig& config, std::uint64_t seed);

/// Reads metadata["config"]. Throws CheckpointError(kMalformedHeader) if absent.
ModelConfig config_of(const TensorStore& store);

}  // namespace tinyasr
