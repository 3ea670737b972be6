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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "testing.hpp"
#include "tinyasr/audio.hpp"

namespace tinyasr {
namespace {

using testing::TempDir;

std::vector<std::uint8_t> pcm16_bytes(const std::vector<std::int16_t>& v) {
  std::vector<std::uint8_t> out(v.size() * 2);
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

AudioErrc load_error(const std::filesystem::path& p) {
  try {
    load_wav(p);
  } catch (const AudioError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected AudioError for " << p;
  return AudioErrc::kIo;
}

TEST(LoadWav, Pcm16IsScaledBy32768) {
  TempDir dir;
  write_wav_raw(dir / "a.wav", 1, 1, 16000, 16, pcm16_bytes({0, 16384, -32768}));
  const AudioBuffer buf = load_wav(dir / "a.wav");
  ASSERT_EQ(buf.size(), 3u);
  EXPECT_EQ(buf.samples[0], 0.0f);
  EXPECT_EQ(buf.samples[1], 0.5f);
  EXPECT_EQ(buf.samples[2], -1.0f);
}

TEST(LoadWav, OneSecondHas16000Samples) {
  TempDir dir;
  write_wav(testing::random_audio(16000, 1), dir / "a.wav", WavEncoding::kPcm16);
  EXPECT_EQ(load_wav(dir / "a.wav").size(), 16000u);
}

TEST(LoadWav, Float32RoundTripsExactly) {
  TempDir dir;
  const AudioBuffer in = testing::random_audio(1000, 2, 1.5f);
  write_wav(in, dir / "f.wav", WavEncoding::kFloat32);
  EXPECT_EQ(load_wav(dir / "f.wav"), in);
}

TEST(LoadWav, DistinctErrors) {
  TempDir dir;
  const auto data = pcm16_bytes({1, 2, 3, 4});
  write_wav_raw(dir / "8k.wav", 1, 1, 8000, 16, data);
  EXPECT_EQ(load_error(dir / "8k.wav"), AudioErrc::kWrongSampleRate);

  write_wav_raw(dir / "stereo.wav", 1, 2, 16000, 16, data);
  EXPECT_EQ(load_error(dir / "stereo.wav"), AudioErrc::kMultiChannel);

  write_wav_raw(dir / "pcm8.wav", 1, 1, 16000, 8, data);
  EXPECT_EQ(load_error(dir / "pcm8.wav"), AudioErrc::kUnsupportedEncoding);

  write_wav_raw(dir / "f64.wav", 3, 1, 16000, 64, data);
  EXPECT_EQ(load_error(dir / "f64.wav"), AudioErrc::kUnsupportedEncoding);

  {
    std::ofstream(dir / "text.wav") << "this is not a wav file at all";
  }
  EXPECT_EQ(load_error(dir / "text.wav"), AudioErrc::kNotWav);
  EXPECT_EQ(load_error(dir / "missing.wav"), AudioErrc::kIo);
}

TEST(LoadWav, ErrorMessageNamesTheProperty) {
  TempDir dir;
  write_wav_raw(dir / "8k.wav", 1, 1, 8000, 16, pcm16_bytes({1}));
  try {
    load_wav(dir / "8k.wav");
    FAIL();
  } catch (const AudioError& e) {
    EXPECT_NE(std::string(e.what()).find("8000 Hz"), std::string::npos);
  }
}

TEST(Gain, ExamplesFromTheContract) {
  const AudioBuffer x{{0.25f, -0.5f, 1.0f, 0.0f}};
  EXPECT_EQ(apply_gain(x, {0.0}), x);

  const AudioBuffer down = apply_gain(x, {-20.0});
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_FLOAT_EQ(down.samples[i], x.samples[i] * 0.1f);
  }
  const AudioBuffer up = apply_gain(x, {20.0 * std::log10(2.0)});
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_FLOAT_EQ(up.samples[i], x.samples[i] * 2.0f);
  }
}

TEST(Gain, NoClipping) {
  const AudioBuffer x{{0.9f, -0.9f}};
  const AudioBuffer y = apply_gain(x, {20.0});
  EXPECT_NEAR(y.samples[0], 9.0f, 1e-5);
  EXPECT_NEAR(y.samples[1], -9.0f, 1e-5);
}

TEST(Gain, InverseAndRmsProperties) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AudioBuffer x = testing::random_audio(4000, seed);
    const double g = -40.0 + static_cast<double>(seed % 11) * 5.0 + 0.37;
    const AudioBuffer back = apply_gain(apply_gain(x, {g}), {-g});
    for (std::size_t i = 0; i < x.size(); ++i) {
      ASSERT_NEAR(back.samples[i], x.samples[i], 1e-6);
    }
    const double ratio = rms(apply_gain(x, {g}).samples) / rms(x.samples);
    EXPECT_NEAR(ratio / std::pow(10.0, g / 20.0), 1.0, 1e-6);
  }
}

TEST(MixAtSnr, CopyAtZeroDbHasUnitScale) {
  const AudioBuffer s = testing::random_audio(1000, 3);
  EXPECT_DOUBLE_EQ(snr_noise_scale(s.samples, s.samples, 0.0), 1.0);
  const AudioBuffer mixed = mix_at_snr(s, s, {0.0, 0});
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_FLOAT_EQ(mixed.samples[i], 2.0f * s.samples[i]);
  }
}

TEST(MixAtSnr, UnitPowersAt20DbGiveOneTenth) {
  const AudioBuffer s{{1.0f, -1.0f, 1.0f, -1.0f}};
  const AudioBuffer n{{-1.0f, -1.0f, 1.0f, 1.0f}};
  EXPECT_NEAR(snr_noise_scale(s.samples, n.samples, 20.0), 0.1, 1e-15);
}

TEST(MixAtSnr, MeasuredSnrMatchesRequest) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const AudioBuffer s = testing::random_audio(3000 + seed * 7, seed, 0.3f);
    const AudioBuffer n = testing::random_audio(1111, seed + 1000, 0.8f);
    const double snr = -10.0 + 50.0 * static_cast<double>(seed) / 99.0;
    const AudioBuffer m = mix_at_snr(s, n, {snr, seed});

    // Independent recomputation of the power ratio from the mixture.
    double ps = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ps += static_cast<double>(s.samples[i]) * s.samples[i];
      const double d = static_cast<double>(m.samples[i]) - s.samples[i];
      pn += d * d;
    }
    EXPECT_NEAR(10.0 * std::log10(ps / pn), snr, 0.01) << "seed " << seed;
  }
}

TEST(MixAtSnr, NoiseTilesFromSeedOffset) {
  const std::vector<float> noise{1, 2, 3};
  EXPECT_EQ(align_noise(noise, 7, 0), (std::vector<float>{1, 2, 3, 1, 2, 3, 1}));
  EXPECT_EQ(align_noise(noise, 4, 5), (std::vector<float>{3, 1, 2, 3}));
}

TEST(MixAtSnr, DeterministicGivenSeed) {
  const AudioBuffer s = testing::random_audio(2000, 1);
  const AudioBuffer n = testing::random_audio(500, 2);
  EXPECT_EQ(mix_at_snr(s, n, {10.0, 42}), mix_at_snr(s, n, {10.0, 42}));
  EXPECT_NE(mix_at_snr(s, n, {10.0, 42}), mix_at_snr(s, n, {10.0, 43}));
}

TEST(MixAtSnr, SilentInputsAreDegenerate) {
  const AudioBuffer silent{std::vector<float>(100, 0.0f)};
  const AudioBuffer loud = testing::random_audio(100, 1);
  for (auto [sig, noise] : {std::pair{silent, loud}, std::pair{loud, silent}}) {
    try {
      mix_at_snr(sig, noise, {10.0, 0});
      FAIL();
    } catch (const AudioError& e) {
      EXPECT_EQ(e.code(), AudioErrc::kDegeneratePower);
    }
  }
}

TEST(MixAtSnr, ConcurrentCallsAgree) {
  const AudioBuffer s = testing::random_audio(8000, 5);
  const AudioBuffer n = testing::random_audio(3000, 6);
  const AudioBuffer expected = mix_at_snr(s, n, {5.0, 9});
  std::vector<AudioBuffer> results(4);
  {
    std::vector<std::jthread> threads;
    for (auto& r : results) {
      threads.emplace_back([&] { r = mix_at_snr(s, n, {5.0, 9}); });
    }
  }
  for (const auto& r : results) EXPECT_EQ(r, expected);
}

TEST(Duration, Examples) {
  EXPECT_EQ(duration_seconds(AudioBuffer{std::vector<float>(16000)}), 1.0);
  EXPECT_EQ(duration_seconds(AudioBuffer{std::vector<float>(8000)}), 0.5);
  EXPECT_EQ(duration_seconds(AudioBuffer{}), 0.0);
}

TEST(WhiteNoise, DeterministicAndBounded) {
  const AudioBuffer a = white_noise(5000, 11);
  EXPECT_EQ(a, white_noise(5000, 11));
  EXPECT_NE(a, white_noise(5000, 12));
  for (float v : a.samples) {
    EXPECT_GE(v, -1.0f);
    EXPECT_LT(v, 1.0f);
  }
  EXPECT_NEAR(mean_power(a.samples), 1.0 / 3.0, 0.02);
}

}  // namespace
}  // namespace tinyasr
