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
#include <span>
#include <vector>

#include "tinyasr/error.hpp"

namespace tinyasr {

inline constexpr int kSampleRate = 16000;

enum class AudioErrc {
  kIo,
  kNotWav,
  kUnsupportedEncoding,
  kWrongSampleRate,
  kMultiChannel,
  kDegeneratePower,
};

using AudioError = CodedError<AudioErrc>;

/// Mono 16 kHz float audio. Samples are nominally in [-1, 1] but nothing
/// clamps them: gain and mixing may push values outside that range.
struct AudioBuffer {
  std::vector<float> samples;

  static constexpr int sample_rate() { return kSampleRate; }
  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  bool operator==(const AudioBuffer&) const = default;
};

struct GainSpec {
  double gain_db = 0.0;
};

struct SnrSpec {
  double snr_db = 0.0;
  std::uint64_t noise_seed = 0;
};

/// Reads a RIFF/WAVE file: PCM 16-bit or IEEE float 32-bit, mono, 16 kHz.
/// Integer PCM is scaled by 1/32768.
AudioBuffer load_wav(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };

/// Debug writer producing files load_wav accepts. PCM16 output is rounded and
/// saturated to the int16 range.
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path,
               WavEncoding encoding = WavEncoding::kFloat32);

/// Raw writer used by tests to build deliberately unsupported files.
void write_wav_raw(const std::filesystem::path& path, std::uint16_t format_tag,
                   std::uint16_t channels, std::uint32_t sample_rate,
                   std::uint16_t bits_per_sample,
                   std::span<const std::uint8_t> data);

AudioBuffer apply_gain(const AudioBuffer& buf, GainSpec gain);

/// Mean of squared samples over the whole buffer; 0 for an empty buffer.
double mean_power(std::span<const float> samples);
double rms(std::span<const float> samples);

/// The noise segment mix_at_snr uses: `noise` tiled end to end starting at
/// offset `seed mod len(noise)` and cut to `length` samples.
std::vector<float> align_noise(std::span<const float> noise, std::size_t length,
                               std::uint64_t seed);

/// Scale factor applied to the aligned noise so that the mixture has the
/// requested SNR against `signal`.
double snr_noise_scale(std::span<const float> signal,
                       std::span<const float> aligned_noise, double snr_db);

/// signal + alpha * aligned noise, with alpha from snr_noise_scale. Throws
/// AudioError(kDegeneratePower) if the signal or the aligned noise is silent.
AudioBuffer mix_at_snr(const AudioBuffer& signal, const AudioBuffer& noise,
                       SnrSpec snr);

/// 10*log10(P(signal) / P(mixture - signal)).
double measured_snr_db(std::span<const float> signal,
                       std::span<const float> mixture);

double duration_seconds(const AudioBuffer& buf);

/// Uniform [-1, 1) noise from a portable splitmix64 stream.
AudioBuffer white_noise(std::size_t num_samples, std::uint64_t seed);

}  // namespace tinyasr
