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

// tinyasr: transcription, evaluation and robustness sweeps for tiny
// encoder-decoder ASR models.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "tinyasr/audio.hpp"
#include "tinyasr/checkpoint.hpp"
#include "tinyasr/config.hpp"
#include "tinyasr/decode.hpp"
#include "tinyasr/harness.hpp"
#include "tinyasr/manifest.hpp"
#include "tinyasr/model.hpp"
#include "tinyasr/tokenizer.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

tinyasr::Language parse_lang(const std::string& code) {
  const auto lang = tinyasr::parse_language(code);
  if (!lang) throw UsageError("unknown language code '" + code + "'");
  return *lang;
}

tinyasr::ReportFormat parse_format(const std::string& f) {
  if (f == "json") return tinyasr::ReportFormat::kJson;
  if (f == "csv") return tinyasr::ReportFormat::kCsv;
  throw UsageError("--format must be json or csv");
}

struct LoadedModel {
  tinyasr::Model model;
  tinyasr::Tokenizer tokenizer;
  std::string model_id;
};

LoadedModel load_model(const std::string& ckpt, const std::string& tok) {
  auto store = std::make_shared<const tinyasr::TensorStore>(tinyasr::load(ckpt));
  auto it = store->metadata().find("model_id");
  std::string id = it != store->metadata().end()
                       ? it->second
                       : std::filesystem::path(ckpt).stem().string();
  return {tinyasr::Model::from_store(store), tinyasr::Tokenizer::load(tok), id};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tinyasr: tiny encoder-decoder speech recognition and evaluation"};
  app.require_subcommand(1);

  const unsigned default_jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string model_path, tokenizer_path, audio_path, manifest_path, lang_code;
  std::string out_path = "-", format = "json", config_path, noise_path;
  std::string gains_text = "-40,-30,-20,-10,0,10", snrs_text = "-10,0,10,20,30,40";
  std::string metric_text;
  unsigned jobs = default_jobs;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  std::optional<double> pad_to;
  bool marginal_only = false;
  int vocab_size = 258;

  auto* transcribe = app.add_subcommand("transcribe", "Transcribe one WAV file");
  transcribe->add_option("--model", model_path, "Checkpoint file")->required();
  transcribe->add_option("--tokenizer", tokenizer_path, "Tokenizer JSON")->required();
  transcribe->add_option("--audio", audio_path, "16 kHz mono WAV")->required();

  auto* eval = app.add_subcommand("eval", "Score a manifest");
  eval->add_option("--model", model_path, "Checkpoint file")->required();
  eval->add_option("--tokenizer", tokenizer_path, "Tokenizer JSON")->required();
  eval->add_option("--manifest", manifest_path, "JSON-lines manifest")->required();
  eval->add_option("--lang", lang_code, "ar|zh|ja|ko|uk|vi")->required();
  eval->add_option("--out", out_path, "Output path, '-' for stdout");
  eval->add_option("--format", format, "json|csv");
  eval->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Gain x SNR robustness sweep");
  sweep->add_option("--model", model_path, "Checkpoint file")->required();
  sweep->add_option("--tokenizer", tokenizer_path, "Tokenizer JSON")->required();
  sweep->add_option("--manifest", manifest_path, "JSON-lines manifest")->required();
  sweep->add_option("--lang", lang_code, "ar|zh|ja|ko|uk|vi")->required();
  sweep->add_option("--gains", gains_text, "Comma-separated gains in dB");
  sweep->add_option("--snrs", snrs_text, "Comma-separated SNRs in dB");
  sweep->add_option("--noise", noise_path, "Noise WAV (default: white noise from --seed)");
  sweep->add_option("--seed", seed, "Noise seed");
  sweep->add_option("--metric", metric_text, "wer|cer (default: cer for ja/zh, else wer)");
  sweep->add_flag("--marginal-only", marginal_only, "Skip the joint gain x SNR cells");
  sweep->add_option("--out", out_path, "Output path, '-' for stdout");
  sweep->add_option("--format", format, "json|csv");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Hours of audio per source");
  stats->add_option("--manifest", manifest_path, "JSON-lines manifest")->required();

  auto* params = app.add_subcommand("params", "Parameter count of a config");
  params->add_option("--config", config_path, "Model config JSON")->required();

  auto* flops = app.add_subcommand("flops", "Encoder FLOP estimate");
  flops->add_option("--config", config_path, "Model config JSON")->required();
  flops->add_option("--seconds", seconds, "Audio duration")->required();
  flops->add_option("--pad-to", pad_to, "Pad input to this many seconds");

  auto* init = app.add_subcommand("init", "Write a randomly initialized checkpoint");
  init->add_option("--config", config_path, "Model config JSON")->required();
  init->add_option("--seed", seed, "Initialization seed");
  init->add_option("--out", out_path, "Checkpoint path")->required();

  auto* tokenizer = app.add_subcommand("tokenizer", "Write the byte-level tokenizer");
  tokenizer->add_option("--vocab-size", vocab_size, "Vocabulary size (>= 258)");
  tokenizer->add_option("--out", out_path, "Tokenizer path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*transcribe) {
      const LoadedModel m = load_model(model_path, tokenizer_path);
      const tinyasr::DecodeResult r =
          tinyasr::greedy_decode(m.model, m.tokenizer, tinyasr::load_wav(audio_path));
      std::cout << r.text << '\n';
    } else if (*eval) {
      const tinyasr::Language lang = parse_lang(lang_code);
      const tinyasr::ReportFormat fmt = parse_format(format);
      const LoadedModel m = load_model(model_path, tokenizer_path);
      tinyasr::EvalOptions opts;
      opts.jobs = jobs;
      opts.model_id = m.model_id;
      opts.config_hash = tinyasr::config_hash(m.model.config());
      const auto report =
          tinyasr::run_eval(tinyasr::model_transcriber(m.model, m.tokenizer),
                            tinyasr::load_manifest(manifest_path), lang, opts);
      tinyasr::emit_report(report, fmt, out_path);
    } else if (*sweep) {
      const tinyasr::Language lang = parse_lang(lang_code);
      const tinyasr::ReportFormat fmt = parse_format(format);
      tinyasr::SweepOptions opts;
      opts.gains_db = parse_list(gains_text, "--gains");
      opts.snrs_db = parse_list(snrs_text, "--snrs");
      opts.seed = seed;
      opts.jobs = jobs;
      opts.joint = !marginal_only;
      if (metric_text == "wer") {
        opts.metric = tinyasr::SweepMetric::kWer;
      } else if (metric_text == "cer") {
        opts.metric = tinyasr::SweepMetric::kCer;
      } else if (!metric_text.empty()) {
        throw UsageError("--metric must be wer or cer");
      }
      const LoadedModel m = load_model(model_path, tokenizer_path);
      if (!noise_path.empty()) opts.noise = tinyasr::load_wav(noise_path);
      const auto grid =
          tinyasr::run_sweep(tinyasr::model_transcriber(m.model, m.tokenizer),
                             tinyasr::load_manifest(manifest_path), lang, opts);
      tinyasr::emit_report(grid, fmt, out_path);
    } else if (*stats) {
      for (const auto& [source, hours] :
           tinyasr::dataset_stats(tinyasr::load_manifest(manifest_path))) {
        std::printf("%s\t%.1f\n", source.c_str(), hours);
      }
    } else if (*params) {
      std::cout << tinyasr::count_params(tinyasr::load_config(config_path)) << '\n';
    } else if (*flops) {
      const tinyasr::ModelConfig config = tinyasr::load_config(config_path);
      std::printf("%.0f\n", tinyasr::estimate_flops(config, seconds, pad_to));
    } else if (*init) {
      tinyasr::save(tinyasr::init_random(tinyasr::load_config(config_path), seed), out_path);
    } else if (*tokenizer) {
      tinyasr::Tokenizer::byte_level(vocab_size).save(out_path);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
