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
#include <optional>
#include <string>
#include <vector>

#include "tinyasr/error.hpp"

namespace tinyasr {

enum class ConfigErrc { kInvalid, kParse, kIo };
using ConfigError = CodedError<ConfigErrc>;

struct ConvLayer {
  int out_channels = 0;
  int kernel = 0;
  int stride = 1;
  bool operator==(const ConvLayer&) const = default;
};

enum class FeedForwardKind { kGelu, kSwiGlu };

/// Every architecture hyperparameter. The last conv-stem layer must emit
/// d_model channels.
struct ModelConfig {
  int d_model = 0;
  int n_heads = 0;
  int enc_layers = 0;
  int dec_layers = 0;
  int ff_mult = 4;
  int vocab_size = 0;
  std::vector<ConvLayer> conv_stem;
  double rope_base = 10000.0;
  double max_tokens_per_second = 6.0;
  FeedForwardKind decoder_ffn = FeedForwardKind::kGelu;

  int head_dim() const { return d_model / n_heads; }
  int ff_dim() const { return ff_mult * d_model; }

  /// Throws ConfigError(kInvalid) naming the violated constraint.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

/// Canonical JSON text (fixed key order, no whitespace). Stored in checkpoint
/// metadata under "config" and hashed for report provenance.
std::string config_to_json(const ModelConfig& config);

/// Accepts JSON with // comments. Unknown keys are ignored.
ModelConfig config_from_json(const std::string& text);
ModelConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over config_to_json.
std::string config_hash(const ModelConfig& config);

/// Frame count after the conv stem for `num_samples` input samples; 0 if the
/// input is too short for some layer.
std::int64_t stem_output_length(const ModelConfig& config,
                                std::int64_t num_samples);

/// Smallest sample count yielding at least one frame.
std::int64_t stem_min_samples(const ModelConfig& config);

struct TensorSpec {
  std::string name;
  std::vector<std::int64_t> shape;
};

/// Every parameter tensor the model reads, in canonical order. See
/// docs/tensor_names.md for the naming scheme.
std::vector<TensorSpec> parameter_layout(const ModelConfig& config);

/// Closed-form parameter count.
std::int64_t count_params(const ModelConfig& config);

struct FlopBreakdown {
  double conv_stem = 0.0;
  double attention = 0.0;
  double feed_forward = 0.0;
  std::int64_t frames = 0;

  double total() const { return conv_stem + attention + feed_forward; }
};

/// Analytic encoder-side FLOPs for `audio_seconds` of input. With
/// `pad_to_seconds` the input is treated as padded to that duration.
/// Throws ConfigError(kInvalid) if audio_seconds <= 0 or the pad is shorter
/// than the audio.
FlopBreakdown flop_breakdown(const ModelConfig& config, double audio_seconds,
                             std::optional<double> pad_to_seconds = {});

double estimate_flops(const ModelConfig& config, double audio_seconds,
                      std::optional<double> pad_to_seconds = {});

}  // namespace tinyasr
