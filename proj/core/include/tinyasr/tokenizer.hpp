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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tinyasr/error.hpp"

namespace tinyasr {

enum class TokenizerErrc { kIo, kParse, kInvalid, kUnknownId };
using TokenizerError = CodedError<TokenizerErrc>;

/// Dense id -> byte-sequence table with start and end specials.
///
/// File format (UTF-8 JSON):
///   {"tokens": {"0": "<base64 bytes>", "1": "...", ...},
///    "specials": {"start_id": 256, "end_id": 257}}
/// Ids must cover [0, size) with no gaps. Special ids may be omitted from
/// "tokens"; they then detokenize to nothing.
class Tokenizer {
 public:
  Tokenizer(std::vector<std::string> pieces, int start_id, int end_id);

  /// ids 0-255 are the raw bytes, 256 = start, 257 = end, padded with empty
  /// pieces up to `vocab_size` (at least 258).
  static Tokenizer byte_level(int vocab_size = 258);

  static Tokenizer from_json(const std::string& text);
  static Tokenizer load(const std::filesystem::path& path);
  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  int size() const { return static_cast<int>(pieces_.size()); }
  int start_id() const { return start_id_; }
  int end_id() const { return end_id_; }
  const std::string& piece(int id) const;

  /// Concatenates the byte pieces and decodes as UTF-8, replacing invalid
  /// sequences with U+FFFD. Throws kUnknownId.
  std::string detokenize(std::span<const int> ids) const;

 private:
  std::vector<std::string> pieces_;
  int start_id_;
  int end_id_;
};

/// UTF-8 -> UTF-8 with every ill-formed subsequence replaced by U+FFFD.
std::string sanitize_utf8(const std::string& bytes);

}  // namespace tinyasr
