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

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tinyasr/audio.hpp"
#include "tinyasr/config.hpp"
#include "tinyasr/tokenizer.hpp"

namespace tinyasr::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// d_model 32, 4 heads, 2+2 layers, stem (8,127,64),(32,7,3),(32,3,2).
ModelConfig toy_config(int vocab_size = 64);

/// ids [0, vocab-2) map to printable ASCII, then start and end.
Tokenizer toy_tokenizer(int vocab_size = 64);

/// Uniform noise scaled to `amplitude`.
AudioBuffer random_audio(std::size_t samples, std::uint64_t seed, float amplitude = 0.5f);

/// Plain recursive Levenshtein distance (memoized), used as an oracle.
std::int64_t brute_levenshtein(const std::vector<int>& a, const std::vector<int>& b);

/// Sino-Korean reading for 0-9999 built from a hand-written table, used to
/// cross-check sino_korean_number.
std::string korean_reading_table(int n);

struct GoldenCase {
  std::string lang;
  std::string input;
  std::string expected;
  int line = 0;
};

/// Reads tests/data/textnorm_golden.tsv. Fields support \t, \n, \\ and \uXXXX
/// escapes.
std::vector<GoldenCase> load_golden(const std::filesystem::path& path);

/// Random code points across scripts relevant to the normalizers.
std::string random_unicode_string(std::uint64_t seed, std::size_t max_len = 24);

std::string read_file(const std::filesystem::path& path);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `exe args` through the shell, capturing both output streams.
CommandResult run_command(const std::string& exe, const std::string& args);

// Writes a toy checkpoint, the byte tokenizer, three WAV fixtures and a
// manifest for them into `dir`. Returns the manifest path.
std::filesystem::path write_smoke_fixture(const std::filesystem::path& dir);

}  // namespace tinyasr::testing
