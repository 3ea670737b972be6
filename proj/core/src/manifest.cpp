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

#include "tinyasr/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "tinyasr/audio.hpp"

namespace tinyasr {

std::vector<EvalSample> parse_manifest(std::istream& in,
                                       const std::filesystem::path& base_dir) {
  std::vector<EvalSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ManifestError(ManifestErrc::kMalformedLine, line_no,
                          std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
      throw ManifestError(ManifestErrc::kMalformedLine, line_no,
                          "expected a JSON object");
    }
    EvalSample s;
    std::string lang;
    try {
      s.audio_path = j.at("audio_path").get<std::string>();
      s.reference = j.at("reference").get<std::string>();
      lang = j.at("language").get<std::string>();
      if (j.contains("duration_s") && !j["duration_s"].is_null()) {
        s.duration_s = j["duration_s"].get<double>();
      }
      if (j.contains("source") && !j["source"].is_null()) {
        s.source = j["source"].get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError(ManifestErrc::kMalformedLine, line_no, e.what());
    }
    const std::optional<Language> parsed = parse_language(lang);
    if (!parsed) {
      throw ManifestError(ManifestErrc::kUnknownLanguage, line_no,
                          "unknown language code '" + lang + "'");
    }
    s.language = *parsed;
    if (s.audio_path.is_relative() && !base_dir.empty()) {
      s.audio_path = base_dir / s.audio_path;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvalSample> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ManifestError(ManifestErrc::kIo, 0, "cannot open manifest: " + path.string());
  }
  return parse_manifest(in, path.parent_path());
}

std::map<std::string, double> dataset_stats(const std::vector<EvalSample>& samples) {
  std::map<std::string, double> seconds;
  for (const EvalSample& s : samples) {
    const double d = s.duration_s ? *s.duration_s : duration_seconds(load_wav(s.audio_path));
    seconds[s.source.value_or("unknown")] += d;
  }
  for (auto& [_, v] : seconds) v /= 3600.0;
  return seconds;
}

}  // namespace tinyasr
