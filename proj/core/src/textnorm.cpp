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

#include "tinyasr/textnorm.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

#include "textnorm_internal.hpp"

namespace tinyasr {
namespace detail {

std::u32string to_u32(std::string_view utf8) {
  const icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

namespace {

icu::UnicodeString to_icu(const std::u32string& text) {
  return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(text.data()),
                                       static_cast<int32_t>(text.size()));
}

std::u32string from_icu(const icu::UnicodeString& s) {
  std::u32string out;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::u32string normalize_with(const icu::Normalizer2* norm, const std::u32string& text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString out = norm->normalize(to_icu(text), status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU normalization failed: ") +
                             u_errorName(status));
  }
  return from_icu(out);
}

}  // namespace

std::string to_utf8(const std::u32string& text) {
  std::string out;
  to_icu(text).toUTF8String(out);
  return out;
}

std::u32string nfc(const std::u32string& text) {
  UErrorCode status = U_ZERO_ERROR;
  return normalize_with(icu::Normalizer2::getNFCInstance(status), text);
}

std::u32string nfkc(const std::u32string& text) {
  UErrorCode status = U_ZERO_ERROR;
  return normalize_with(icu::Normalizer2::getNFKCInstance(status), text);
}

}  // namespace detail

namespace {

using detail::nfc;
using detail::to_u32;
using detail::to_utf8;

bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

bool is_symbol(char32_t c) {
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

bool is_mark(char32_t c) {
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
      return true;
    default:
      return false;
  }
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

std::u32string collapse(const std::u32string& text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string finish(const std::u32string& text) { return to_utf8(collapse(nfc(text))); }

bool is_arabic_diacritic(char32_t c) {
  return (c >= 0x064B && c <= 0x065F) || c == 0x0670;
}

bool is_bracket(char32_t c) {
  if (c == U'<' || c == U'>' || c == 0xFF1C || c == 0xFF1E) return true;
  return u_getIntPropertyValue(static_cast<UChar32>(c), UCHAR_BIDI_PAIRED_BRACKET_TYPE) !=
         U_BPT_NONE;
}

bool is_tilde(char32_t c) {
  return c == U'~' || c == 0x223C || c == 0x223E || c == 0x301C || c == 0x3030 ||
         c == 0xFF5E;
}

constexpr char32_t kProlongedSoundMark = 0x30FC;

bool is_basic_latin(char32_t c) { return c < 0x80; }

// Deletes [..] spans, then non-empty (..) spans, leftmost first, no nesting.
std::u32string drop_bracket_spans(const std::u32string& in, char32_t open,
                                  char32_t close, bool allow_empty) {
  std::u32string out;
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == open) {
      const std::size_t j = in.find(close, i + 1);
      if (j != std::u32string::npos && (allow_empty || j > i + 1)) {
        i = j + 1;
        continue;
      }
    }
    out.push_back(in[i++]);
  }
  return out;
}

}  // namespace

std::optional<Language> parse_language(std::string_view code) {
  for (Language l : kAllLanguages) {
    if (language_code(l) == code) return l;
  }
  return std::nullopt;
}

std::string_view language_code(Language lang) {
  switch (lang) {
    case Language::kAr: return "ar";
    case Language::kZh: return "zh";
    case Language::kJa: return "ja";
    case Language::kKo: return "ko";
    case Language::kUk: return "uk";
    case Language::kVi: return "vi";
  }
  return "??";
}

bool has_word_boundaries(Language lang) {
  return lang != Language::kJa && lang != Language::kZh;
}

std::string collapse_whitespace(std::string_view text) {
  return finish(to_u32(text));
}

std::string normalize_arabic(std::string_view text) {
  std::u32string out;
  for (char32_t c : nfc(to_u32(text))) {
    if (is_arabic_diacritic(c) || is_punct(c)) continue;
    if (c >= 0x0660 && c <= 0x0669) c = U'0' + (c - 0x0660);
    out.push_back(c);
  }
  return finish(out);
}

std::string normalize_korean(std::string_view text) {
  std::u32string stripped;
  for (char32_t c : nfc(to_u32(text))) {
    if (is_punct(c) || is_bracket(c)) continue;
    stripped.push_back(c);
  }
  std::u32string out;
  for (std::size_t i = 0; i < stripped.size();) {
    if (stripped[i] >= U'0' && stripped[i] <= U'9') {
      std::string digits;
      while (i < stripped.size() && stripped[i] >= U'0' && stripped[i] <= U'9') {
        digits.push_back(static_cast<char>(stripped[i++]));
      }
      out += to_u32(sino_korean_number(digits));
    } else {
      out.push_back(stripped[i++]);
    }
  }
  return finish(out);
}

std::string normalize_japanese(std::string_view text) {
  const std::u32string in = nfc(to_u32(text));

  // Width folding: NFKC only over the half-/full-width forms block, so other
  // compatibility characters are left alone.
  std::u32string folded;
  for (std::size_t i = 0; i < in.size();) {
    if (in[i] >= 0xFF01 && in[i] <= 0xFF9F) {
      std::u32string run;
      while (i < in.size() && in[i] >= 0xFF01 && in[i] <= 0xFF9F) run.push_back(in[i++]);
      folded += detail::nfkc(run);
    } else {
      folded.push_back(in[i++]);
    }
  }
  folded = nfc(folded);

  std::u32string no_tilde;
  for (char32_t c : folded) {
    if (!is_tilde(c)) no_tilde.push_back(c);
  }
  const std::u32string spaced = collapse(no_tilde);

  std::u32string unspaced;
  for (std::size_t i = 0; i < spaced.size(); ++i) {
    if (spaced[i] == U' ') {
      // collapse() guarantees a non-space on both sides.
      if (!(is_basic_latin(spaced[i - 1]) && is_basic_latin(spaced[i + 1]))) continue;
    }
    unspaced.push_back(spaced[i]);
  }

  std::u32string out;
  for (char32_t c : unspaced) {
    if (c == kProlongedSoundMark && !out.empty() && out.back() == kProlongedSoundMark) {
      continue;
    }
    out.push_back(c);
  }
  return finish(out);
}

std::string normalize_basic(std::string_view text) {
  icu::UnicodeString lowered = detail::to_icu(nfc(to_u32(text)));
  lowered.toLower(icu::Locale::getRoot());
  std::u32string s = detail::from_icu(lowered);
  s = drop_bracket_spans(s, U'[', U']', true);
  s = drop_bracket_spans(s, U'(', U')', false);
  for (char32_t& c : s) {
    if (is_punct(c) || is_symbol(c) || is_mark(c)) c = U' ';
  }
  return finish(s);
}

NormalizedText normalize(std::string_view text, Language lang) {
  switch (lang) {
    case Language::kAr: return {normalize_arabic(text), lang};
    case Language::kKo: return {normalize_korean(text), lang};
    case Language::kJa: return {normalize_japanese(text), lang};
    case Language::kZh:
    case Language::kUk:
    case Language::kVi: return {normalize_basic(text), lang};
  }
  return {collapse_whitespace(text), lang};
}

}  // namespace tinyasr
