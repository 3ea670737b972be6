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

#include "tinyasr/metrics.hpp"

#include <algorithm>

#include "textnorm_internal.hpp"

namespace tinyasr {

EditOps& EditOps::operator+=(const EditOps& o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  hits += o.hits;
  ref_len += o.ref_len;
  return *this;
}

EditOps edit_ops(std::span<const std::u32string> ref, std::span<const std::u32string> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  // cost[i][j]: distance between ref[0, i) and hyp[0, j).
  std::vector<std::int64_t> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& {
    return cost[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditOps ops;
  ops.ref_len = static_cast<std::int64_t>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::int64_t here = at(i, j);
    if (i > 0 && j > 0) {
      const bool match = ref[i - 1] == hyp[j - 1];
      if (here == at(i - 1, j - 1) + (match ? 0 : 1)) {
        (match ? ops.hits : ops.substitutions)++;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == at(i - 1, j) + 1) {
      ++ops.deletions;
      --i;
    } else {
      ++ops.insertions;
      --j;
    }
  }
  return ops;
}

std::vector<std::u32string> word_tokens(std::string_view text) {
  std::vector<std::u32string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) out.push_back(detail::to_u32(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

std::vector<std::u32string> char_tokens(std::string_view text) {
  std::vector<std::u32string> out;
  for (char32_t c : detail::to_u32(text)) {
    if (c != U' ') out.emplace_back(1, c);
  }
  return out;
}

EditOps word_ops(std::string_view ref, std::string_view hyp) {
  return edit_ops(word_tokens(ref), word_tokens(hyp));
}

EditOps char_ops(std::string_view ref, std::string_view hyp) {
  return edit_ops(char_tokens(ref), char_tokens(hyp));
}

std::optional<ErrorRate> sample_rate(const EditOps& ops) {
  if (ops.ref_len == 0) return std::nullopt;
  return ErrorRate{100.0 * static_cast<double>(ops.errors()) /
                   static_cast<double>(ops.ref_len)};
}

std::optional<ErrorRate> wer(std::string_view ref, std::string_view hyp) {
  return sample_rate(word_ops(ref, hyp));
}

std::optional<ErrorRate> cer(std::string_view ref, std::string_view hyp) {
  return sample_rate(char_ops(ref, hyp));
}

ErrorRate corpus_error(std::span<const EditOps> samples) {
  EditOps total;
  for (const EditOps& s : samples) {
    if (s.ref_len > 0) total += s;
  }
  if (total.ref_len == 0) {
    throw MetricsError(MetricsErrc::kDegenerateCorpus,
                       "corpus has no sample with a non-empty reference");
  }
  return *sample_rate(total);
}

UnitAccuracy unit_accuracy(double error_percent, std::int64_t params) {
  if (params <= 0) {
    throw MetricsError(MetricsErrc::kInvalidArgument,
                       "parameter count must be positive");
  }
  return {(100.0 - error_percent) / static_cast<double>(params)};
}

ErrorDelta error_delta(const std::map<std::string, ErrorRate>& model,
                       const std::map<std::string, ErrorRate>& baseline) {
  if (model.size() != baseline.size() ||
      !std::equal(model.begin(), model.end(), baseline.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw MetricsError(MetricsErrc::kKeyMismatch,
                       "model and baseline cover different evaluations");
  }
  if (model.empty()) {
    throw MetricsError(MetricsErrc::kInvalidArgument, "no evaluations to compare");
  }
  ErrorDelta out;
  for (const auto& [key, rate] : model) {
    const double base = baseline.at(key).value;
    if (base == 0.0) {
      throw MetricsError(MetricsErrc::kInvalidArgument,
                         "baseline error for '" + key + "' is zero");
    }
    out.mean_delta += base - rate.value;
    out.mean_relative_reduction += 100.0 * (base - rate.value) / base;
  }
  const auto n = static_cast<double>(model.size());
  out.mean_delta /= n;
  out.mean_relative_reduction /= n;
  return out;
}

}  // namespace tinyasr
