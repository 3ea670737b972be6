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
#include <memory>
#include <span>
#include <vector>

#include "tinyasr/audio.hpp"
#include "tinyasr/checkpoint.hpp"
#include "tinyasr/config.hpp"
#include "tinyasr/error.hpp"
#include "tinyasr/matrix.hpp"

namespace tinyasr {

enum class ModelErrc {
  kMissingTensor,
  kShapeMismatch,
  kInputTooShort,
  kPositionMismatch,
  kTokenOutOfRange,
  kInvalidArgument,
};

using ModelError = CodedError<ModelErrc>;

struct EncoderStates {
  Matrix frames;  // T_enc x d_model
  double source_duration_s = 0.0;
};

/// Autoregressive state for one utterance. Self-attention keys/values grow by
/// one row per decoder_step; cross-attention keys/values are fixed.
struct DecoderCache {
  struct Layer {
    Matrix self_k, self_v;
    Matrix cross_k, cross_v;
  };
  std::vector<Layer> layers;
  std::int64_t length = 0;
};

/// Encoder-decoder transformer over raw 16 kHz audio:
///   conv stem (strided Conv1d + GELU per layer)
///   -> pre-norm encoder blocks with RoPE self-attention and GELU FFN
///   -> pre-norm decoder blocks with RoPE causal self-attention,
///      cross-attention and FFN; logits through the tied token embedding.
///
/// Weights are borrowed from a shared immutable TensorStore, so copies of a
/// Model are cheap and any number of threads may use one Model concurrently.
class Model {
 public:
  /// Reads the config from store metadata and checks every tensor named by
  /// parameter_layout against its expected shape.
  static Model from_store(std::shared_ptr<const TensorStore> store);
  static Model from_store(TensorStore store);

  const ModelConfig& config() const { return config_; }
  const TensorStore& store() const { return *store_; }

  /// T_enc x d_model frames. Output length follows stem_output_length; no
  /// padding to a fixed duration. Throws kInputTooShort with the minimum
  /// sample count.
  Matrix conv_stem(const AudioBuffer& buf) const;

  EncoderStates encoder_forward(const Matrix& frames, double source_duration_s) const;

  /// conv_stem followed by encoder_forward.
  EncoderStates encode(const AudioBuffer& buf) const;

  /// Empty self-attention cache plus cross-attention keys/values for `enc`.
  DecoderCache start_decoding(const EncoderStates& enc) const;

  /// Logits for `token` at position `pos`, appending this position's keys and
  /// values to `cache`. `pos` must equal cache.length.
  std::vector<float> decoder_step(int token, std::int64_t pos,
                                  DecoderCache& cache) const;

  /// Reference path without a cache: runs the whole prefix with a causal
  /// mask and returns one logit row per position.
  Matrix decode_uncached(std::span<const int> tokens, const EncoderStates& enc) const;

 private:
  struct Linear {
    std::span<const float> weight;  // out x in
    std::span<const float> bias;
    std::int64_t in = 0, out = 0;
  };
  struct Norm {
    std::span<const float> weight, bias;
  };
  struct Attention {
    Linear q, k, v, o;
  };
  struct FeedForward {
    Linear up, down;
    bool gated = false;
  };
  struct ConvWeights {
    std::span<const float> weight;  // out x in x kernel
    std::span<const float> bias;
    int in_channels = 0;
    ConvLayer shape;
  };
  struct EncoderLayer {
    Norm attn_norm;
    Attention attn;
    Norm ffn_norm;
    FeedForward ffn;
  };
  struct DecoderLayer {
    Norm self_norm;
    Attention self_attn;
    Norm cross_norm;
    Attention cross_attn;
    Norm ffn_norm;
    FeedForward ffn;
  };

  Model(ModelConfig config, std::shared_ptr<const TensorStore> store);

  Matrix linear(const Matrix& x, const Linear& w) const;
  Matrix layer_norm(const Matrix& x, const Norm& n) const;
  Matrix feed_forward(const Matrix& x, const FeedForward& ff) const;
  void rope_heads(Matrix& x, std::int64_t start_pos) const;
  /// Multi-head softmax attention. With `causal`, query row r sits at
  /// absolute position q_offset + r and sees keys [0, q_offset + r].
  Matrix attend(const Matrix& q, const Matrix& k, const Matrix& v, bool causal,
                std::int64_t q_offset) const;
  std::vector<float> project_vocab(std::span<const float> hidden) const;

  ModelConfig config_;
  std::shared_ptr<const TensorStore> store_;
  std::vector<ConvWeights> stem_;
  std::vector<EncoderLayer> encoder_;
  Norm enc_final_;
  std::span<const float> embed_;  // vocab x d_model
  std::vector<DecoderLayer> decoder_;
  Norm dec_final_;
};

/// Tanh approximation.
float gelu(float x);

}  // namespace tinyasr
