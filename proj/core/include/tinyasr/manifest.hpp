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
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tinyasr/error.hpp"
#include "tinyasr/textnorm.hpp"

namespace tinyasr {

enum class ManifestErrc { kIo, kMalformedLine, kUnknownLanguage };

class ManifestError : public CodedError<ManifestErrc> {
 public:
  ManifestError(ManifestErrc code, std::size_t line, const std::string& what)
      : CodedError(code, line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  /// 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct EvalSample {
  std::filesystem::path audio_path;
  std::string reference;
  Language language = Language::kUk;
  std::optional<double> duration_s;
  std::optional<std::string> source;
};

/// JSON-lines, one object per line:
///   {"audio_path": "...", "reference": "...", "language": "ko",
///    "duration_s": 3.2, "source": "fleurs"}
/// duration_s and source are optional, unknown keys are ignored and blank
/// lines skipped. Relative audio paths resolve against `base_dir`.
std::vector<EvalSample> parse_manifest(std::istream& in,
                                       const std::filesystem::path& base_dir = {});

/// parse_manifest with base_dir = the manifest's directory.
std::vector<EvalSample> load_manifest(const std::filesystem::path& path);

/// Hours of audio per source ("unknown" when absent). Uses duration_s when
/// present, otherwise reads the audio file.
std::map<std::string, double> dataset_stats(const std::vector<EvalSample>& samples);

}  // namespace tinyasr
