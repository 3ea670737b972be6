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

#include "tinyasr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tinyasr/audio.hpp"
#include "tinyasr/random.hpp"

namespace tinyasr {

using ordered_json = nlohmann::ordered_json;

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw ConfigError(ConfigErrc::kInvalid, "invalid model config: " + what);
  };
  if (d_model <= 0) fail("d_model must be positive");
  if (n_heads <= 0) fail("n_heads must be positive");
  if (enc_layers <= 0) fail("enc_layers must be positive");
  if (dec_layers <= 0) fail("dec_layers must be positive");
  if (ff_mult <= 0) fail("ff_mult must be positive");
  if (vocab_size <= 0) fail("vocab_size must be positive");
  if (d_model % n_heads != 0) fail("d_model must be divisible by n_heads");
  if (head_dim() % 2 != 0) {
    fail("head dimension " + std::to_string(head_dim()) +
         " must be even for rotary embeddings");
  }
  if (conv_stem.empty()) fail("conv_stem must have at least one layer");
  for (std::size_t i = 0; i < conv_stem.size(); ++i) {
    const ConvLayer& l = conv_stem[i];
    const std::string at = "conv_stem[" + std::to_string(i) + "]";
    if (l.out_channels <= 0) fail(at + ".out_channels must be positive");
    if (l.kernel <= 0) fail(at + ".kernel must be positive");
    if (l.stride < 1) fail(at + ".stride must be >= 1");
  }
  if (conv_stem.back().out_channels != d_model) {
    fail("last conv_stem layer must output d_model channels");
  }
  if (!(rope_base > 0.0) || !std::isfinite(rope_base)) {
    fail("rope_base must be positive");
  }
  if (!(max_tokens_per_second > 0.0) || !std::isfinite(max_tokens_per_second)) {
    fail("max_tokens_per_second must be positive");
  }
}

std::string config_to_json(const ModelConfig& c) {
  ordered_json j;
  j["d_model"] = c.d_model;
  j["n_heads"] = c.n_heads;
  j["enc_layers"] = c.enc_layers;
  j["dec_layers"] = c.dec_layers;
  j["ff_mult"] = c.ff_mult;
  j["vocab_size"] = c.vocab_size;
  ordered_json stem = ordered_json::array();
  for (const ConvLayer& l : c.conv_stem) {
    stem.push_back({l.out_channels, l.kernel, l.stride});
  }
  j["conv_stem"] = std::move(stem);
  j["rope_base"] = c.rope_base;
  j["max_tokens_per_second"] = c.max_tokens_per_second;
  j["decoder_ffn"] = c.decoder_ffn == FeedForwardKind::kSwiGlu ? "swiglu" : "gelu";
  return j.dump();
}

ModelConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(ConfigErrc::kParse, std::string("config JSON: ") + e.what());
  }
  ModelConfig c;
  try {
    c.d_model = j.at("d_model").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.enc_layers = j.at("enc_layers").get<int>();
    c.dec_layers = j.at("dec_layers").get<int>();
    c.ff_mult = j.value("ff_mult", 4);
    c.vocab_size = j.at("vocab_size").get<int>();
    for (const auto& layer : j.at("conv_stem")) {
      ConvLayer l;
      if (layer.is_array()) {
        if (layer.size() != 3) {
          throw ConfigError(ConfigErrc::kParse,
                            "conv_stem entries must be [out_channels, kernel, stride]");
        }
        l = {layer[0].get<int>(), layer[1].get<int>(), layer[2].get<int>()};
      } else {
        l = {layer.at("out_channels").get<int>(), layer.at("kernel").get<int>(),
             layer.at("stride").get<int>()};
      }
      c.conv_stem.push_back(l);
    }
    c.rope_base = j.value("rope_base", 10000.0);
    c.max_tokens_per_second = j.value("max_tokens_per_second", 6.0);
    const std::string ffn = j.value("decoder_ffn", std::string("gelu"));
    if (ffn == "gelu") {
      c.decoder_ffn = FeedForwardKind::kGelu;
    } else if (ffn == "swiglu") {
      c.decoder_ffn = FeedForwardKind::kSwiGlu;
    } else {
      throw ConfigError(ConfigErrc::kParse, "unknown decoder_ffn: " + ffn);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(ConfigErrc::kParse, std::string("config field: ") + e.what());
  }
  c.validate();
  return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ConfigErrc::kIo, "cannot open config file: " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_hash(const ModelConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(config))));
  return buf;
}

std::int64_t stem_output_length(const ModelConfig& config,
                                std::int64_t num_samples) {
  std::int64_t len = num_samples;
  for (const ConvLayer& l : config.conv_stem) {
    if (len < l.kernel) return 0;
    len = (len - l.kernel) / l.stride + 1;
  }
  return len;
}

std::int64_t stem_min_samples(const ModelConfig& config) {
  // Walk backwards: a layer needs kernel + (out - 1) * stride inputs to emit
  // `out` outputs.
  std::int64_t need = 1;
  for (auto it = config.conv_stem.rbegin(); it != config.conv_stem.rend(); ++it) {
    need = it->kernel + (need - 1) * it->stride;
  }
  return need;
}

namespace {

void add_linear(std::vector<TensorSpec>& out, const std::string& prefix,
                std::int64_t out_dim, std::int64_t in_dim) {
  out.push_back({prefix + ".weight", {out_dim, in_dim}});
  out.push_back({prefix + ".bias", {out_dim}});
}

void add_norm(std::vector<TensorSpec>& out, const std::string& prefix,
              std::int64_t d) {
  out.push_back({prefix + ".weight", {d}});
  out.push_back({prefix + ".bias", {d}});
}

void add_attention(std::vector<TensorSpec>& out, const std::string& prefix,
                   std::int64_t d) {
  for (const char* proj : {"q_proj", "k_proj", "v_proj", "o_proj"}) {
    add_linear(out, prefix + "." + proj, d, d);
  }
}

}  // namespace

std::vector<TensorSpec> parameter_layout(const ModelConfig& c) {
  std::vector<TensorSpec> out;
  const std::int64_t d = c.d_model;
  const std::int64_t h = c.ff_dim();

  std::int64_t in_ch = 1;
  for (std::size_t i = 0; i < c.conv_stem.size(); ++i) {
    const ConvLayer& l = c.conv_stem[i];
    const std::string p = "stem." + std::to_string(i);
    out.push_back({p + ".weight", {l.out_channels, in_ch, l.kernel}});
    out.push_back({p + ".bias", {l.out_channels}});
    in_ch = l.out_channels;
  }

  for (int layer = 0; layer < c.enc_layers; ++layer) {
    const std::string p = "enc." + std::to_string(layer);
    add_norm(out, p + ".attn_norm", d);
    add_attention(out, p + ".attn", d);
    add_norm(out, p + ".ffn_norm", d);
    add_linear(out, p + ".ffn.up", h, d);
    add_linear(out, p + ".ffn.down", d, h);
  }
  add_norm(out, "enc.final_norm", d);

  out.push_back({"dec.embed.weight", {c.vocab_size, d}});
  const std::int64_t up = c.decoder_ffn == FeedForwardKind::kSwiGlu ? 2 * h : h;
  for (int layer = 0; layer < c.dec_layers; ++layer) {
    const std::string p = "dec." + std::to_string(layer);
    add_norm(out, p + ".self_attn_norm", d);
    add_attention(out, p + ".self_attn", d);
    add_norm(out, p + ".cross_attn_norm", d);
    add_attention(out, p + ".cross_attn", d);
    add_norm(out, p + ".ffn_norm", d);
    add_linear(out, p + ".ffn.up", up, d);
    add_linear(out, p + ".ffn.down", d, h);
  }
  add_norm(out, "dec.final_norm", d);
  return out;
}

std::int64_t count_params(const ModelConfig& c) {
  const std::int64_t d = c.d_model;
  const std::int64_t h = c.ff_dim();
  const std::int64_t norm = 2 * d;
  const std::int64_t attention = 4 * (d * d + d);
  const std::int64_t ffn_down = h * d + d;
  const std::int64_t enc_ffn = (d * h + h) + ffn_down;
  const std::int64_t dec_up = c.decoder_ffn == FeedForwardKind::kSwiGlu ? 2 * h : h;
  const std::int64_t dec_ffn = (d * dec_up + dec_up) + ffn_down;

  std::int64_t stem = 0;
  std::int64_t in_ch = 1;
  for (const ConvLayer& l : c.conv_stem) {
    stem += (in_ch * l.kernel + 1) * l.out_channels;
    in_ch = l.out_channels;
  }
  const std::int64_t encoder = c.enc_layers * (2 * norm + attention + enc_ffn) + norm;
  // Output projection shares the token embedding.
  const std::int64_t decoder = c.vocab_size * d +
                               c.dec_layers * (3 * norm + 2 * attention + dec_ffn) +
                               norm;
  return stem + encoder + decoder;
}

FlopBreakdown flop_breakdown(const ModelConfig& c, double audio_seconds,
                             std::optional<double> pad_to_seconds) {
  if (!(audio_seconds > 0.0)) {
    throw ConfigError(ConfigErrc::kInvalid, "audio_seconds must be positive");
  }
  if (pad_to_seconds && !(*pad_to_seconds >= audio_seconds)) {
    throw ConfigError(ConfigErrc::kInvalid,
                      "pad_to_seconds must be >= audio_seconds");
  }
  const double seconds = pad_to_seconds ? *pad_to_seconds : audio_seconds;
  std::int64_t len = std::llround(seconds * kSampleRate);

  FlopBreakdown f;
  std::int64_t in_ch = 1;
  for (const ConvLayer& l : c.conv_stem) {
    len = len < l.kernel ? 0 : (len - l.kernel) / l.stride + 1;
    f.conv_stem += 2.0 * l.kernel * static_cast<double>(in_ch) * l.out_channels *
                   static_cast<double>(len);
    in_ch = l.out_channels;
  }
  const double t = static_cast<double>(len);
  const double d = c.d_model;
  f.frames = len;
  f.attention = c.enc_layers * (2.0 * t * t * d + 8.0 * t * d * d);
  f.feed_forward = c.enc_layers * (4.0 * t * d * d * c.ff_mult);
  return f;
}

double estimate_flops(const ModelConfig& config, double audio_seconds,
                      std::optional<double> pad_to_seconds) {
  return flop_breakdown(config, audio_seconds, pad_to_seconds).total();
}

}  // namespace tinyasr
