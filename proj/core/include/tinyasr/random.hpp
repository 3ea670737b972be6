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
#include <string_view>

namespace tinyasr {

/// splitmix64 finalizer. Used as a counter-based generator: the n-th value of
/// a stream keyed by `key` is mix64(key + (n + 1) * kGolden64).
constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Stateless stream: value(i) depends only on (key, i).
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t bits(std::uint64_t index) const {
    return mix64(key_ + (index + 1) * kGolden64);
  }

  /// Uniform in [0, 1) with 24 bits of resolution, exact in float.
  constexpr double unit(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 40) * (1.0 / 16777216.0);
  }

 private:
  std::uint64_t key_;
};

}  // namespace tinyasr
