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

#include "tinyasr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tinyasr/rope.hpp"

namespace tinyasr {

float gelu(float x) {
  constexpr float kSqrt2OverPi = 0.7978845608028654f;
  return 0.5f * x * (1.0f + std::tanh(kSqrt2OverPi * (x + 0.044715f * x * x * x)));
}

namespace {

constexpr float kLayerNormEps = 1e-5f;

float silu(float x) { return x / (1.0f + std::exp(-x)); }

std::string shape_string(const std::vector<std::int64_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

void softmax_inplace(std::span<float> x) {
  const float mx = *std::max_element(x.begin(), x.end());
  float sum = 0.0f;
  for (float& v : x) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (float& v : x) v /= sum;
}

}  // namespace

Model Model::from_store(TensorStore store) {
  return from_store(std::make_shared<const TensorStore>(std::move(store)));
}

Model Model::from_store(std::shared_ptr<const TensorStore> store) {
  ModelConfig config = config_of(*store);
  for (const TensorSpec& spec : parameter_layout(config)) {
    const TensorRecord* rec = store->find(spec.name);
    if (rec == nullptr) {
      throw ModelError(ModelErrc::kMissingTensor,
                       "checkpoint is missing tensor " + spec.name);
    }
    if (rec->shape != spec.shape) {
      throw ModelError(ModelErrc::kShapeMismatch,
                       "tensor " + spec.name + " has shape " +
                           shape_string(rec->shape) + ", expected " +
                           shape_string(spec.shape));
    }
  }
  return Model(std::move(config), std::move(store));
}

Model::Model(ModelConfig config, std::shared_ptr<const TensorStore> store)
    : config_(std::move(config)), store_(std::move(store)) {
  const TensorStore& s = *store_;
  auto data = [&](const std::string& name) -> std::span<const float> {
    return s.at(name).data;
  };
  auto linear_of = [&](const std::string& p) {
    const TensorRecord& w = s.at(p + ".weight");
    return Linear{w.data, data(p + ".bias"), w.shape[1], w.shape[0]};
  };
  auto norm_of = [&](const std::string& p) {
    return Norm{data(p + ".weight"), data(p + ".bias")};
  };
  auto attention_of = [&](const std::string& p) {
    return Attention{linear_of(p + ".q_proj"), linear_of(p + ".k_proj"),
                     linear_of(p + ".v_proj"), linear_of(p + ".o_proj")};
  };

  int in_ch = 1;
  for (std::size_t i = 0; i < config_.conv_stem.size(); ++i) {
    const std::string p = "stem." + std::to_string(i);
    stem_.push_back({data(p + ".weight"), data(p + ".bias"), in_ch,
                     config_.conv_stem[i]});
    in_ch = config_.conv_stem[i].out_channels;
  }
  for (int l = 0; l < config_.enc_layers; ++l) {
    const std::string p = "enc." + std::to_string(l);
    encoder_.push_back({norm_of(p + ".attn_norm"), attention_of(p + ".attn"),
                        norm_of(p + ".ffn_norm"),
                        {linear_of(p + ".ffn.up"), linear_of(p + ".ffn.down"), false}});
  }
  enc_final_ = norm_of("enc.final_norm");
  embed_ = data("dec.embed.weight");
  const bool gated = config_.decoder_ffn == FeedForwardKind::kSwiGlu;
  for (int l = 0; l < config_.dec_layers; ++l) {
    const std::string p = "dec." + std::to_string(l);
    decoder_.push_back({norm_of(p + ".self_attn_norm"), attention_of(p + ".self_attn"),
                        norm_of(p + ".cross_attn_norm"), attention_of(p + ".cross_attn"),
                        norm_of(p + ".ffn_norm"),
                        {linear_of(p + ".ffn.up"), linear_of(p + ".ffn.down"), gated}});
  }
  dec_final_ = norm_of("dec.final_norm");
}

Matrix Model::linear(const Matrix& x, const Linear& w) const {
  Matrix out(x.rows, w.out);
  for (std::int64_t r = 0; r < x.rows; ++r) {
    const float* in = x.data.data() + r * x.cols;
    float* dst = out.data.data() + r * w.out;
    for (std::int64_t o = 0; o < w.out; ++o) {
      const float* wr = w.weight.data() + o * w.in;
      float acc = 0.0f;
      for (std::int64_t i = 0; i < w.in; ++i) acc += in[i] * wr[i];
      dst[o] = acc + w.bias[o];
    }
  }
  return out;
}

Matrix Model::layer_norm(const Matrix& x, const Norm& n) const {
  Matrix out(x.rows, x.cols);
  const float inv_cols = 1.0f / static_cast<float>(x.cols);
  for (std::int64_t r = 0; r < x.rows; ++r) {
    std::span<const float> in = x.row(r);
    float mean = 0.0f;
    for (float v : in) mean += v;
    mean *= inv_cols;
    float var = 0.0f;
    for (float v : in) var += (v - mean) * (v - mean);
    var *= inv_cols;
    const float inv_std = 1.0f / std::sqrt(var + kLayerNormEps);
    std::span<float> dst = out.row(r);
    for (std::int64_t c = 0; c < x.cols; ++c) {
      dst[c] = (in[c] - mean) * inv_std * n.weight[c] + n.bias[c];
    }
  }
  return out;
}

Matrix Model::feed_forward(const Matrix& x, const FeedForward& ff) const {
  Matrix up = linear(x, ff.up);
  if (!ff.gated) {
    for (float& v : up.data) v = gelu(v);
    return linear(up, ff.down);
  }
  // First half carries values, second half the SiLU gate.
  const std::int64_t hidden = ff.down.in;
  Matrix gated(x.rows, hidden);
  for (std::int64_t r = 0; r < x.rows; ++r) {
    std::span<const float> u = up.row(r);
    std::span<float> g = gated.row(r);
    for (std::int64_t i = 0; i < hidden; ++i) g[i] = u[i] * silu(u[hidden + i]);
  }
  return linear(gated, ff.down);
}

void Model::rope_heads(Matrix& x, std::int64_t start_pos) const {
  const std::int64_t hd = config_.head_dim();
  for (std::int64_t r = 0; r < x.rows; ++r) {
    std::span<float> row = x.row(r);
    for (int h = 0; h < config_.n_heads; ++h) {
      rotate_pairs(row.subspan(static_cast<std::size_t>(h * hd),
                               static_cast<std::size_t>(hd)),
                   static_cast<double>(start_pos + r), config_.rope_base);
    }
  }
}

Matrix Model::attend(const Matrix& q, const Matrix& k, const Matrix& v,
                     bool causal, std::int64_t q_offset) const {
  const std::int64_t hd = config_.head_dim();
  const float scale = 1.0f / std::sqrt(static_cast<float>(hd));
  Matrix out(q.rows, q.cols);
  std::vector<float> scores(static_cast<std::size_t>(k.rows));
  for (std::int64_t r = 0; r < q.rows; ++r) {
    const std::int64_t visible = causal ? std::min(k.rows, q_offset + r + 1) : k.rows;
    for (int h = 0; h < config_.n_heads; ++h) {
      const float* qh = q.data.data() + r * q.cols + h * hd;
      for (std::int64_t j = 0; j < visible; ++j) {
        const float* kh = k.data.data() + j * k.cols + h * hd;
        float dot = 0.0f;
        for (std::int64_t i = 0; i < hd; ++i) dot += qh[i] * kh[i];
        scores[j] = dot * scale;
      }
      std::span<float> s(scores.data(), static_cast<std::size_t>(visible));
      softmax_inplace(s);
      float* oh = out.data.data() + r * out.cols + h * hd;
      for (std::int64_t j = 0; j < visible; ++j) {
        const float* vh = v.data.data() + j * v.cols + h * hd;
        const float p = s[j];
        for (std::int64_t i = 0; i < hd; ++i) oh[i] += p * vh[i];
      }
    }
  }
  return out;
}

Matrix Model::conv_stem(const AudioBuffer& buf) const {
  const std::int64_t frames =
      stem_output_length(config_, static_cast<std::int64_t>(buf.size()));
  if (frames < 1) {
    throw ModelError(ModelErrc::kInputTooShort,
                     "input of " + std::to_string(buf.size()) +
                         " samples is too short for the conv stem; need at least " +
                         std::to_string(stem_min_samples(config_)) + " samples");
  }
  // Activations are time-major: rows are time steps, columns channels.
  Matrix x(static_cast<std::int64_t>(buf.size()), 1);
  std::copy(buf.samples.begin(), buf.samples.end(), x.data.begin());
  for (const ConvWeights& cw : stem_) {
    const std::int64_t k = cw.shape.kernel;
    const std::int64_t stride = cw.shape.stride;
    const std::int64_t cin = cw.in_channels;
    const std::int64_t cout = cw.shape.out_channels;
    const std::int64_t out_len = (x.rows - k) / stride + 1;
    Matrix y(out_len, cout);
    for (std::int64_t t = 0; t < out_len; ++t) {
      const std::int64_t t0 = t * stride;
      for (std::int64_t o = 0; o < cout; ++o) {
        const float* w = cw.weight.data() + o * cin * k;
        float acc = cw.bias[o];
        for (std::int64_t c = 0; c < cin; ++c) {
          const float* wc = w + c * k;
          for (std::int64_t j = 0; j < k; ++j) {
            acc += wc[j] * x.data[(t0 + j) * cin + c];
          }
        }
        y(t, o) = gelu(acc);
      }
    }
    x = std::move(y);
  }
  return x;
}

EncoderStates Model::encoder_forward(const Matrix& frames,
                                     double source_duration_s) const {
  if (frames.rows < 1) {
    throw ModelError(ModelErrc::kInvalidArgument, "encoder input has no frames");
  }
  if (frames.cols != config_.d_model) {
    throw ModelError(ModelErrc::kShapeMismatch,
                     "encoder input has " + std::to_string(frames.cols) +
                         " channels, expected d_model=" +
                         std::to_string(config_.d_model));
  }
  Matrix x = frames;
  for (const EncoderLayer& layer : encoder_) {
    Matrix h = layer_norm(x, layer.attn_norm);
    Matrix q = linear(h, layer.attn.q);
    Matrix k = linear(h, layer.attn.k);
    Matrix v = linear(h, layer.attn.v);
    rope_heads(q, 0);
    rope_heads(k, 0);
    Matrix a = linear(attend(q, k, v, false, 0), layer.attn.o);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += a.data[i];

    Matrix f = feed_forward(layer_norm(x, layer.ffn_norm), layer.ffn);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += f.data[i];
  }
  return {layer_norm(x, enc_final_), source_duration_s};
}

EncoderStates Model::encode(const AudioBuffer& buf) const {
  return encoder_forward(conv_stem(buf), duration_seconds(buf));
}

DecoderCache Model::start_decoding(const EncoderStates& enc) const {
  if (enc.frames.cols != config_.d_model || enc.frames.rows < 1) {
    throw ModelError(ModelErrc::kShapeMismatch,
                     "encoder states do not match d_model");
  }
  DecoderCache cache;
  cache.layers.reserve(decoder_.size());
  for (const DecoderLayer& layer : decoder_) {
    DecoderCache::Layer c;
    c.self_k = Matrix(0, config_.d_model);
    c.self_v = Matrix(0, config_.d_model);
    c.cross_k = linear(enc.frames, layer.cross_attn.k);
    c.cross_v = linear(enc.frames, layer.cross_attn.v);
    cache.layers.push_back(std::move(c));
  }
  return cache;
}

std::vector<float> Model::project_vocab(std::span<const float> hidden) const {
  const std::int64_t d = config_.d_model;
  std::vector<float> logits(static_cast<std::size_t>(config_.vocab_size));
  for (std::int64_t t = 0; t < config_.vocab_size; ++t) {
    const float* e = embed_.data() + t * d;
    float acc = 0.0f;
    for (std::int64_t i = 0; i < d; ++i) acc += e[i] * hidden[i];
    logits[t] = acc;
  }
  return logits;
}

std::vector<float> Model::decoder_step(int token, std::int64_t pos,
                                       DecoderCache& cache) const {
  if (token < 0 || token >= config_.vocab_size) {
    throw ModelError(ModelErrc::kTokenOutOfRange,
                     "token id " + std::to_string(token) + " outside vocabulary of " +
                         std::to_string(config_.vocab_size));
  }
  if (pos != cache.length || cache.layers.size() != decoder_.size()) {
    throw ModelError(ModelErrc::kPositionMismatch,
                     "decoder position " + std::to_string(pos) +
                         " does not match cache length " +
                         std::to_string(cache.length));
  }
  const std::int64_t d = config_.d_model;
  Matrix x(1, d);
  std::copy_n(embed_.begin() + token * d, d, x.data.begin());

  for (std::size_t l = 0; l < decoder_.size(); ++l) {
    const DecoderLayer& layer = decoder_[l];
    DecoderCache::Layer& c = cache.layers[l];

    Matrix h = layer_norm(x, layer.self_norm);
    Matrix q = linear(h, layer.self_attn.q);
    Matrix k = linear(h, layer.self_attn.k);
    Matrix v = linear(h, layer.self_attn.v);
    rope_heads(q, pos);
    rope_heads(k, pos);
    c.self_k.append_row(k.row(0));
    c.self_v.append_row(v.row(0));
    Matrix a = linear(attend(q, c.self_k, c.self_v, false, 0), layer.self_attn.o);
    for (std::int64_t i = 0; i < d; ++i) x.data[i] += a.data[i];

    h = layer_norm(x, layer.cross_norm);
    q = linear(h, layer.cross_attn.q);
    a = linear(attend(q, c.cross_k, c.cross_v, false, 0), layer.cross_attn.o);
    for (std::int64_t i = 0; i < d; ++i) x.data[i] += a.data[i];

    Matrix f = feed_forward(layer_norm(x, layer.ffn_norm), layer.ffn);
    for (std::int64_t i = 0; i < d; ++i) x.data[i] += f.data[i];
  }
  ++cache.length;
  return project_vocab(layer_norm(x, dec_final_).row(0));
}

Matrix Model::decode_uncached(std::span<const int> tokens,
                              const EncoderStates& enc) const {
  const std::int64_t d = config_.d_model;
  const auto n = static_cast<std::int64_t>(tokens.size());
  Matrix x(n, d);
  for (std::int64_t r = 0; r < n; ++r) {
    const int t = tokens[r];
    if (t < 0 || t >= config_.vocab_size) {
      throw ModelError(ModelErrc::kTokenOutOfRange,
                       "token id " + std::to_string(t) + " outside vocabulary");
    }
    std::copy_n(embed_.begin() + t * d, d, x.row(r).begin());
  }
  for (const DecoderLayer& layer : decoder_) {
    Matrix h = layer_norm(x, layer.self_norm);
    Matrix q = linear(h, layer.self_attn.q);
    Matrix k = linear(h, layer.self_attn.k);
    Matrix v = linear(h, layer.self_attn.v);
    rope_heads(q, 0);
    rope_heads(k, 0);
    Matrix a = linear(attend(q, k, v, true, 0), layer.self_attn.o);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += a.data[i];

    h = layer_norm(x, layer.cross_norm);
    q = linear(h, layer.cross_attn.q);
    Matrix ck = linear(enc.frames, layer.cross_attn.k);
    Matrix cv = linear(enc.frames, layer.cross_attn.v);
    a = linear(attend(q, ck, cv, false, 0), layer.cross_attn.o);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += a.data[i];

    Matrix f = feed_forward(layer_norm(x, layer.ffn_norm), layer.ffn);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += f.data[i];
  }
  Matrix normed = layer_norm(x, dec_final_);
  Matrix logits(n, config_.vocab_size);
  for (std::int64_t r = 0; r < n; ++r) {
    std::vector<float> row = project_vocab(normed.row(r));
    std::copy(row.begin(), row.end(), logits.row(r).begin());
  }
  return logits;
}

}  // namespace tinyasr
