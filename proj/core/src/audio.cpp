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

#include "tinyasr/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "tinyasr/random.hpp"

namespace tinyasr {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV and checkpoint I/O assume a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw AudioError(AudioErrc::kIo, "cannot open audio file: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const std::string where = " (" + path.string() + ")";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw AudioError(AudioErrc::kNotWav, "not a RIFF/WAVE file" + where);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const auto size = read_le<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) {
        throw AudioError(AudioErrc::kNotWav, "malformed fmt chunk" + where);
      }
      format = read_le<std::uint16_t>(chunk + 8);
      channels = read_le<std::uint16_t>(chunk + 10);
      rate = read_le<std::uint32_t>(chunk + 12);
      bits = read_le<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible && size >= 40) {
        // First two bytes of the sub-format GUID carry the real format tag.
        format = read_le<std::uint16_t>(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = std::min<std::size_t>(size, avail);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || data == nullptr) {
    throw AudioError(AudioErrc::kNotWav, "missing fmt or data chunk" + where);
  }
  if (channels != 1) {
    throw AudioError(AudioErrc::kMultiChannel,
                     "expected mono audio, got " + std::to_string(channels) +
                         " channels" + where);
  }
  if (rate != static_cast<std::uint32_t>(kSampleRate)) {
    throw AudioError(AudioErrc::kWrongSampleRate,
                     "expected 16000 Hz, got " + std::to_string(rate) + " Hz" +
                         where);
  }

  AudioBuffer buf;
  if (format == kFormatPcm && bits == 16) {
    buf.samples.resize(data_size / 2);
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
      buf.samples[i] =
          static_cast<float>(read_le<std::int16_t>(data + 2 * i)) / 32768.0f;
    }
  } else if (format == kFormatFloat && bits == 32) {
    buf.samples.resize(data_size / 4);
    std::memcpy(buf.samples.data(), data, buf.samples.size() * 4);
  } else {
    throw AudioError(AudioErrc::kUnsupportedEncoding,
                     "unsupported encoding: format tag " +
                         std::to_string(format) + ", " + std::to_string(bits) +
                         " bits per sample" + where);
  }
  return buf;
}

void write_wav_raw(const std::filesystem::path& path, std::uint16_t format_tag,
                   std::uint16_t channels, std::uint32_t sample_rate,
                   std::uint16_t bits_per_sample,
                   std::span<const std::uint8_t> data) {
  std::vector<std::uint8_t> out;
  out.reserve(44 + data.size());
  const std::uint16_t block_align = channels * bits_per_sample / 8;
  put_tag(out, "RIFF");
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(36 + data.size()));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, format_tag);
  put_le<std::uint16_t>(out, channels);
  put_le<std::uint32_t>(out, sample_rate);
  put_le<std::uint32_t>(out, sample_rate * block_align);
  put_le<std::uint16_t>(out, block_align);
  put_le<std::uint16_t>(out, bits_per_sample);
  put_tag(out, "data");
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  if (data.size() & 1u) out.push_back(0);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) {
    throw AudioError(AudioErrc::kIo, "cannot write audio file: " + path.string());
  }
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path,
               WavEncoding encoding) {
  std::vector<std::uint8_t> data;
  if (encoding == WavEncoding::kPcm16) {
    data.reserve(buf.size() * 2);
    for (float s : buf.samples) {
      const float scaled = std::round(s * 32768.0f);
      const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0f, 32767.0f));
      put_le<std::int16_t>(data, v);
    }
    write_wav_raw(path, kFormatPcm, 1, kSampleRate, 16, data);
  } else {
    data.resize(buf.size() * 4);
    std::memcpy(data.data(), buf.samples.data(), data.size());
    write_wav_raw(path, kFormatFloat, 1, kSampleRate, 32, data);
  }
}

AudioBuffer apply_gain(const AudioBuffer& buf, GainSpec gain) {
  const double scale = std::pow(10.0, gain.gain_db / 20.0);
  AudioBuffer out;
  out.samples.resize(buf.size());
  std::transform(buf.samples.begin(), buf.samples.end(), out.samples.begin(),
                 [scale](float s) { return static_cast<float>(s * scale); });
  return out;
}

double mean_power(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return acc / static_cast<double>(samples.size());
}

double rms(std::span<const float> samples) {
  return std::sqrt(mean_power(samples));
}

std::vector<float> align_noise(std::span<const float> noise, std::size_t length,
                               std::uint64_t seed) {
  std::vector<float> out(length);
  if (noise.empty()) return out;
  std::size_t pos = static_cast<std::size_t>(seed % noise.size());
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = noise[pos];
    if (++pos == noise.size()) pos = 0;
  }
  return out;
}

double snr_noise_scale(std::span<const float> signal,
                       std::span<const float> aligned_noise, double snr_db) {
  const double ps = mean_power(signal);
  const double pn = mean_power(aligned_noise);
  if (!(ps > 0.0)) {
    throw AudioError(AudioErrc::kDegeneratePower, "signal is silent");
  }
  if (!(pn > 0.0)) {
    throw AudioError(AudioErrc::kDegeneratePower, "noise is silent");
  }
  return std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
}

AudioBuffer mix_at_snr(const AudioBuffer& signal, const AudioBuffer& noise,
                       SnrSpec snr) {
  if (!(mean_power(noise.samples) > 0.0)) {
    throw AudioError(AudioErrc::kDegeneratePower, "noise is silent");
  }
  const std::vector<float> aligned =
      align_noise(noise.samples, signal.size(), snr.noise_seed);
  const double alpha = snr_noise_scale(signal.samples, aligned, snr.snr_db);
  AudioBuffer out;
  out.samples.resize(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out.samples[i] = static_cast<float>(signal.samples[i] + alpha * aligned[i]);
  }
  return out;
}

double measured_snr_db(std::span<const float> signal,
                       std::span<const float> mixture) {
  double ps = 0.0, pn = 0.0;
  const std::size_t n = std::min(signal.size(), mixture.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double s = signal[i];
    const double d = static_cast<double>(mixture[i]) - s;
    ps += s * s;
    pn += d * d;
  }
  return 10.0 * std::log10(ps / pn);
}

double duration_seconds(const AudioBuffer& buf) {
  return static_cast<double>(buf.size()) / kSampleRate;
}

AudioBuffer white_noise(std::size_t num_samples, std::uint64_t seed) {
  const CounterStream stream(mix64(seed ^ fnv1a64("white_noise")));
  AudioBuffer out;
  out.samples.resize(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    out.samples[i] = static_cast<float>(2.0 * stream.unit(i) - 1.0);
  }
  return out;
}

}  // namespace tinyasr
