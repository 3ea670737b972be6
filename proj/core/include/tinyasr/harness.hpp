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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tinyasr/audio.hpp"
#include "tinyasr/decode.hpp"
#include "tinyasr/error.hpp"
#include "tinyasr/manifest.hpp"
#include "tinyasr/metrics.hpp"
#include "tinyasr/textnorm.hpp"

namespace tinyasr {

enum class HarnessErrc { kInvalidArgument, kLanguageMismatch, kAllSamplesFailed, kIo };
using HarnessError = CodedError<HarnessErrc>;

/// Audio -> raw transcript. Called concurrently from worker threads, so it
/// must be safe to share.
using Transcriber = std::function<std::string(const AudioBuffer&)>;

/// greedy_decode over a shared model. Both references must outlive the
/// returned callable.
Transcriber model_transcriber(const Model& model, const Tokenizer& tokenizer);

struct SampleResult {
  std::int64_t id = 0;  // manifest index
  std::string audio;
  bool failed = false;
  std::string error;
  std::string raw_hyp;
  std::string norm_ref;
  std::string norm_hyp;
  std::optional<EditOps> word_ops;  // absent for ja and zh
  EditOps char_ops;
};

struct CorpusSummary {
  std::optional<ErrorRate> wer;  // absent for ja and zh
  ErrorRate cer;
  std::int64_t excluded_count = 0;  // empty normalized reference
  std::int64_t failed_count = 0;
};

struct EvalMeta {
  std::string model_id;
  std::string config_hash;
  Language language = Language::kUk;
  std::string normalization_version{kNormalizerVersion};
};

struct EvalReport {
  EvalMeta meta;
  std::vector<SampleResult> per_sample;
  CorpusSummary corpus;
};

struct EvalOptions {
  unsigned jobs = 1;
  std::string model_id;
  std::string config_hash;
  /// Applied to each loaded buffer before transcription; receives the
  /// manifest index. Used by the robustness sweep.
  std::function<AudioBuffer(const AudioBuffer&, std::size_t)> transform;
};

/// Transcribes, normalizes reference and hypothesis with `lang`'s normalizer
/// and scores every sample. Per-sample failures are recorded, not thrown.
/// Aggregation follows manifest order, so any `jobs` value gives the same
/// report.
EvalReport run_eval(const Transcriber& transcribe, const std::vector<EvalSample>& samples,
                    Language lang, const EvalOptions& options = {});

/// Pools per-sample ops exactly as run_eval does.
CorpusSummary summarize(const std::vector<SampleResult>& per_sample, Language lang);

enum class SweepMetric { kWer, kCer };

/// CER for ja/zh, WER otherwise.
SweepMetric default_metric(Language lang);

struct SweepOptions {
  std::vector<double> gains_db{-40, -30, -20, -10, 0, 10};
  std::vector<double> snrs_db{-10, 0, 10, 20, 30, 40};
  /// Noise recording; synthetic white noise from `seed` when absent.
  std::optional<AudioBuffer> noise;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool joint = true;
  std::optional<SweepMetric> metric;
};

struct SweepGrid {
  Language language = Language::kUk;
  SweepMetric metric = SweepMetric::kWer;
  std::vector<double> gains_db;  // sorted
  std::vector<double> snrs_db;   // sorted
  ErrorRate clean;
  std::vector<ErrorRate> gain_only;  // one per gain, no noise
  std::vector<ErrorRate> snr_only;   // one per SNR, gain 0 dB
  /// cells[g][s]: gain applied first, then noise at the SNR measured against
  /// the post-gain signal. Empty when SweepOptions::joint is false.
  std::vector<std::vector<ErrorRate>> cells;

  bool operator==(const SweepGrid&) const = default;
};

SweepGrid run_sweep(const Transcriber& transcribe, const std::vector<EvalSample>& samples,
                    Language lang, const SweepOptions& options);

enum class ReportFormat { kJson, kCsv };

std::string report_to_json(const EvalReport& report);
/// One row per sample.
std::string report_to_csv(const EvalReport& report);
std::string grid_to_json(const SweepGrid& grid);
/// Long format "gain_db,snr_db,error_percent". Joint cells when present,
/// otherwise the marginals with the omitted axis left empty.
std::string grid_to_csv(const SweepGrid& grid);

/// Writes to `path`, or stdout when path is "-".
void emit_report(const EvalReport& report, ReportFormat format,
                 const std::filesystem::path& path);
void emit_report(const SweepGrid& grid, ReportFormat format,
                 const std::filesystem::path& path);

/// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_number(double value);

}  // namespace tinyasr
