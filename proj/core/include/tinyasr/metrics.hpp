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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinyasr/error.hpp"

namespace tinyasr {

enum class MetricsErrc { kDegenerateCorpus, kInvalidArgument, kKeyMismatch };
using MetricsError = CodedError<MetricsErrc>;

struct EditOps {
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t hits = 0;
  std::int64_t ref_len = 0;

  std::int64_t errors() const { return substitutions + insertions + deletions; }
  EditOps& operator+=(const EditOps& o);
  bool operator==(const EditOps&) const = default;
};

/// Percent; may exceed 100 when insertions dominate.
struct ErrorRate {
  double value = 0.0;
  bool operator==(const ErrorRate&) const = default;
};

struct UnitAccuracy {
  double value = 0.0;  // percent per parameter
};

/// Levenshtein alignment with unit costs. Among minimal alignments the
/// traceback prefers hit > substitution > deletion > insertion.
EditOps edit_ops(std::span<const std::u32string> ref, std::span<const std::u32string> hyp);

/// Splits on U+0020, dropping empty tokens.
std::vector<std::u32string> word_tokens(std::string_view text);
/// One token per code point, spaces removed.
std::vector<std::u32string> char_tokens(std::string_view text);

EditOps word_ops(std::string_view ref, std::string_view hyp);
EditOps char_ops(std::string_view ref, std::string_view hyp);

/// 100 * errors / ref_len; nullopt when the reference is empty (the sample
/// is then excluded from pooling).
std::optional<ErrorRate> sample_rate(const EditOps& ops);

std::optional<ErrorRate> wer(std::string_view ref, std::string_view hyp);
std::optional<ErrorRate> cer(std::string_view ref, std::string_view hyp);

/// Pooled over samples with ref_len > 0. Throws kDegenerateCorpus if none.
ErrorRate corpus_error(std::span<const EditOps> samples);

/// (100 - error_percent) / params. Throws kInvalidArgument for params <= 0.
UnitAccuracy unit_accuracy(double error_percent, std::int64_t params);

struct ErrorDelta {
  double mean_delta = 0.0;                  // mean(baseline - model), points
  double mean_relative_reduction = 0.0;     // mean((baseline - model) / baseline), percent
};

/// Uniform mean over evaluations. Both maps must have identical key sets and
/// every baseline must be non-zero.
ErrorDelta error_delta(const std::map<std::string, ErrorRate>& model,
                       const std::map<std::string, ErrorRate>& baseline);

}  // namespace tinyasr
