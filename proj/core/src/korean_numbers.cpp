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

#include <array>

#include "textnorm_internal.hpp"
#include "tinyasr/textnorm.hpp"

namespace tinyasr {
namespace {

constexpr std::array<std::u32string_view, 10> kDigits = {
    U"영", U"일", U"이", U"삼", U"사", U"오", U"육", U"칠", U"팔", U"구"};
constexpr std::array<std::u32string_view, 4> kSmallUnits = {U"천", U"백", U"십", U""};
constexpr std::array<std::u32string_view, 4> kGroupUnits = {U"", U"만", U"억", U"조"};

// Reading of a zero-padded 4-digit group with value > 0.
std::u32string read_group(std::u32string_view four) {
  std::u32string out;
  for (std::size_t i = 0; i < 4; ++i) {
    const int d = four[i] - U'0';
    if (d == 0) continue;
    if (d != 1 || i == 3) out += kDigits[d];
    out += kSmallUnits[i];
  }
  return out;
}

}  // namespace

std::string sino_korean_number(std::string_view digits) {
  std::u32string in;
  for (char c : digits) {
    if (c >= '0' && c <= '9') in.push_back(static_cast<char32_t>(c));
  }
  if (in.empty()) return {};

  std::u32string out;
  if (in.size() > 16 || (in.size() > 1 && in[0] == U'0')) {
    for (char32_t c : in) out += kDigits[c - U'0'];
    return detail::to_utf8(out);
  }
  if (in.find_first_not_of(U'0') == std::u32string::npos) {
    return detail::to_utf8(std::u32string(kDigits[0]));
  }

  const std::size_t groups = (in.size() + 3) / 4;
  in.insert(0, groups * 4 - in.size(), U'0');
  for (std::size_t g = 0; g < groups; ++g) {
    const std::u32string_view four(in.data() + 4 * g, 4);
    if (four == U"0000") continue;
    const std::size_t unit = groups - 1 - g;
    if (unit == 1 && four == U"0001") {
      out += kGroupUnits[1];  // 10000 reads 만, not 일만
    } else {
      out += read_group(four);
      out += kGroupUnits[unit];
    }
  }
  return detail::to_utf8(out);
}

}  // namespace tinyasr
