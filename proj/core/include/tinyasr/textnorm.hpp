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

#include <optional>
#include <string>
#include <string_view>

namespace tinyasr {

enum class Language { kAr, kZh, kJa, kKo, kUk, kVi };

inline constexpr Language kAllLanguages[] = {Language::kAr, Language::kZh,
                                             Language::kJa, Language::kKo,
                                             Language::kUk, Language::kVi};

/// Bumped whenever any normalizer's output can change.
inline constexpr std::string_view kNormalizerVersion = "textnorm-1";

std::optional<Language> parse_language(std::string_view code);
std::string_view language_code(Language lang);

/// Japanese and Chinese are scored by CER only.
bool has_word_boundaries(Language lang);

struct NormalizedText {
  std::string text;
  Language language;
  bool operator==(const NormalizedText&) const = default;
};

/// Dispatches to the language pipeline: ar -> arabic, ko -> korean,
/// ja -> japanese, zh/uk/vi -> basic. Every pipeline starts with NFC and ends
/// with NFC, whitespace collapse to single U+0020 and trimming. Total and
/// idempotent.
NormalizedText normalize(std::string_view text, Language lang);

/// Drops tashkeel (U+064B-U+065F, U+0670) and punctuation (category P), maps
/// Eastern Arabic digits U+0660-U+0669 to 0-9.
std::string normalize_arabic(std::string_view text);

/// Drops punctuation and brackets, spells out ASCII digit runs with
/// Sino-Korean numerals.
std::string normalize_korean(std::string_view text);

/// Subset of the neologdn defaults:
///   full-width ASCII (U+FF01-U+FF5E) -> ASCII, half-width katakana -> full
///   width (voicing marks composed), tildes removed, whitespace removed
///   unless both neighbours are Basic Latin, runs of U+30FC collapsed.
std::string normalize_japanese(std::string_view text);

/// Whisper-style basic normalizer: lowercase, delete [..] and (..) spans,
/// every P/S/M code point becomes a space.
std::string normalize_basic(std::string_view text);

/// Sino-Korean reading of an ASCII digit string, e.g. "10" -> "십",
/// "12345" -> "만이천삼백사십오". Strings with a leading zero (other than "0"
/// itself) or longer than 16 digits are read digit by digit.
std::string sino_korean_number(std::string_view digits);

/// NFC, whitespace runs -> single space, trimmed.
std::string collapse_whitespace(std::string_view text);

}  // namespace tinyasr
