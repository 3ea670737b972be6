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

#include "tinyasr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace tinyasr {
namespace {

constexpr std::size_t kWhiteNoiseSamples = 10 * kSampleRate;

SampleResult score_sample(const Transcriber& transcribe, const EvalSample& sample,
                          std::size_t index, Language lang, const EvalOptions& options) {
  SampleResult r;
  r.id = static_cast<std::int64_t>(index);
  r.audio = sample.audio_path.generic_string();
  r.norm_ref = normalize(sample.reference, lang).text;
  try {
    AudioBuffer audio = load_wav(sample.audio_path);
    if (options.transform) audio = options.transform(audio, index);
    r.raw_hyp = transcribe(audio);
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
    return r;
  }
  r.norm_hyp = normalize(r.raw_hyp, lang).text;
  if (has_word_boundaries(lang)) r.word_ops = word_ops(r.norm_ref, r.norm_hyp);
  r.char_ops = char_ops(r.norm_ref, r.norm_hyp);
  return r;
}

double pick(const CorpusSummary& c, SweepMetric metric) {
  if (metric == SweepMetric::kWer) return c.wer->value;
  return c.cer.value;
}

}  // namespace

Transcriber model_transcriber(const Model& model, const Tokenizer& tokenizer) {
  return [&model, &tokenizer](const AudioBuffer& buf) {
    return greedy_decode(model, tokenizer, buf).text;
  };
}

CorpusSummary summarize(const std::vector<SampleResult>& per_sample, Language lang) {
  CorpusSummary c;
  std::vector<EditOps> words, chars;
  for (const SampleResult& r : per_sample) {
    if (r.failed) {
      ++c.failed_count;
      continue;
    }
    if (r.char_ops.ref_len == 0) ++c.excluded_count;
    chars.push_back(r.char_ops);
    if (r.word_ops) words.push_back(*r.word_ops);
  }
  c.cer = corpus_error(chars);
  if (has_word_boundaries(lang)) c.wer = corpus_error(words);
  return c;
}

EvalReport run_eval(const Transcriber& transcribe, const std::vector<EvalSample>& samples,
                    Language lang, const EvalOptions& options) {
  if (samples.empty()) {
    throw HarnessError(HarnessErrc::kInvalidArgument, "manifest has no samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].language != lang) {
      throw HarnessError(HarnessErrc::kLanguageMismatch,
                         "sample " + std::to_string(i) + " is '" +
                             std::string(language_code(samples[i].language)) +
                             "', expected '" + std::string(language_code(lang)) + "'");
    }
  }

  std::vector<SampleResult> results(samples.size());
  const unsigned jobs =
      std::clamp<unsigned>(options.jobs, 1, static_cast<unsigned>(samples.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      results[i] = score_sample(transcribe, samples[i], i, lang, options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < samples.size(); i = next++) {
          results[i] = score_sample(transcribe, samples[i], i, lang, options);
        }
      });
    }
  }

  const bool all_failed = std::all_of(results.begin(), results.end(),
                                      [](const SampleResult& r) { return r.failed; });
  if (all_failed) {
    throw HarnessError(HarnessErrc::kAllSamplesFailed,
                       "every sample failed; first error: " + results.front().error);
  }

  EvalReport report;
  report.meta.model_id = options.model_id;
  report.meta.config_hash = options.config_hash;
  report.meta.language = lang;
  report.per_sample = std::move(results);
  report.corpus = summarize(report.per_sample, lang);
  return report;
}

SweepMetric default_metric(Language lang) {
  return has_word_boundaries(lang) ? SweepMetric::kWer : SweepMetric::kCer;
}

SweepGrid run_sweep(const Transcriber& transcribe, const std::vector<EvalSample>& samples,
                    Language lang, const SweepOptions& options) {
  if (options.gains_db.empty() || options.snrs_db.empty()) {
    throw HarnessError(HarnessErrc::kInvalidArgument, "sweep axes must be non-empty");
  }
  SweepGrid grid;
  grid.language = lang;
  grid.metric = options.metric.value_or(default_metric(lang));
  if (grid.metric == SweepMetric::kWer && !has_word_boundaries(lang)) {
    throw HarnessError(HarnessErrc::kInvalidArgument,
                       "WER is undefined for " + std::string(language_code(lang)));
  }
  grid.gains_db = options.gains_db;
  grid.snrs_db = options.snrs_db;
  std::sort(grid.gains_db.begin(), grid.gains_db.end());
  std::sort(grid.snrs_db.begin(), grid.snrs_db.end());

  const AudioBuffer noise =
      options.noise ? *options.noise : white_noise(kWhiteNoiseSamples, options.seed);

  auto evaluate = [&](std::optional<double> gain, std::optional<double> snr) {
    EvalOptions eo;
    eo.jobs = options.jobs;
    eo.transform = [&, gain, snr](const AudioBuffer& in, std::size_t index) {
      AudioBuffer out = gain ? apply_gain(in, GainSpec{*gain}) : in;
      if (snr) out = mix_at_snr(out, noise, SnrSpec{*snr, options.seed + index});
      return out;
    };
    return ErrorRate{pick(run_eval(transcribe, samples, lang, eo).corpus, grid.metric)};
  };

  grid.clean = evaluate(std::nullopt, std::nullopt);
  for (double g : grid.gains_db) grid.gain_only.push_back(evaluate(g, std::nullopt));
  for (double s : grid.snrs_db) grid.snr_only.push_back(evaluate(std::nullopt, s));
  if (options.joint) {
    for (double g : grid.gains_db) {
      std::vector<ErrorRate> row;
      for (double s : grid.snrs_db) row.push_back(evaluate(g, s));
      grid.cells.push_back(std::move(row));
    }
  }
  return grid;
}

}  // namespace tinyasr
