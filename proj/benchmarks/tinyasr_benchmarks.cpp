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

#include <benchmark/benchmark.h>

#include <string>

#include "tinyasr/audio.hpp"
#include "tinyasr/checkpoint.hpp"
#include "tinyasr/metrics.hpp"
#include "tinyasr/model.hpp"
#include "tinyasr/random.hpp"
#include "tinyasr/textnorm.hpp"

namespace {

using namespace tinyasr;

ModelConfig bench_config() {
  ModelConfig c;
  c.d_model = 64;
  c.n_heads = 4;
  c.enc_layers = 2;
  c.dec_layers = 2;
  c.vocab_size = 258;
  c.conv_stem = {{16, 127, 64}, {64, 7, 3}, {64, 3, 2}};
  return c;
}

AudioBuffer noise_audio(std::size_t n) {
  AudioBuffer b = white_noise(n, 1);
  for (float& x : b.samples) x *= 0.3f;
  return b;
}

// Encoder cost should grow with the input duration, not a fixed window.
void BM_Encode(benchmark::State& state) {
  const Model m = Model::from_store(init_random(bench_config(), 1));
  const AudioBuffer audio = noise_audio(static_cast<std::size_t>(state.range(0)) * 16000);
  for (auto _ : state) benchmark::DoNotOptimize(m.encode(audio));
  state.SetLabel(std::to_string(state.range(0)) + " s");
}
BENCHMARK(BM_Encode)->Arg(1)->Arg(2)->Arg(5)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_DecoderStep(benchmark::State& state) {
  const Model m = Model::from_store(init_random(bench_config(), 1));
  const EncoderStates enc = m.encode(noise_audio(5 * 16000));
  for (auto _ : state) {
    state.PauseTiming();
    DecoderCache cache = m.start_decoding(enc);
    state.ResumeTiming();
    for (std::int64_t t = 0; t < 16; ++t) benchmark::DoNotOptimize(m.decoder_step(1, t, cache));
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_DecoderStep)->Unit(benchmark::kMicrosecond);

void BM_EditDistance(benchmark::State& state) {
  const CounterStream s(3);
  std::string ref, hyp;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    ref += static_cast<char>('a' + s.bits(2 * i) % 26);
    hyp += static_cast<char>('a' + s.bits(2 * i + 1) % 26);
  }
  for (auto _ : state) benchmark::DoNotOptimize(char_ops(ref, hyp));
}
BENCHMARK(BM_EditDistance)->Arg(64)->Arg(256)->Arg(1024);

void BM_Normalize(benchmark::State& state) {
  const auto lang = static_cast<Language>(state.range(0));
  const std::string text =
      "Hello, World! (aside) Ｈｅｌｌｏ ｶﾞｷﾞｸﾞ ウマーーーい 2024년 5월 كِتَاب ٣٤ Việt Nam";
  for (auto _ : state) benchmark::DoNotOptimize(normalize(text, lang));
  state.SetLabel(std::string(language_code(lang)));
}
BENCHMARK(BM_Normalize)->DenseRange(0, 5);

void BM_MixAtSnr(benchmark::State& state) {
  const AudioBuffer signal = noise_audio(10 * 16000);
  const AudioBuffer noise = white_noise(16000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mix_at_snr(signal, noise, {10.0, 4}));
}
BENCHMARK(BM_MixAtSnr)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
