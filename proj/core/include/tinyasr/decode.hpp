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
#include <string>
#include <vector>

#include "tinyasr/audio.hpp"
#include "tinyasr/error.hpp"
#include "tinyasr/model.hpp"
#include "tinyasr/tokenizer.hpp"

namespace tinyasr {

enum class DecodeErrc { kInvalidArgument, kVocabularyMismatch };
using DecodeError = CodedError<DecodeErrc>;

enum class StopReason { kEndToken, kLengthCap };

struct DecodeResult {
  std::vector<int> token_ids;  // excludes start and end markers
  std::string text;
  int steps = 0;               // decoder_step calls along this hypothesis
  StopReason stopped_by = StopReason::kEndToken;
  double log_prob = 0.0;       // sum of log-softmax of every chosen token, end included

  bool operator==(const DecodeResult&) const = default;
};

/// One utterance's incremental decoder. step() feeds a token at the next
/// position and returns logits over the vocabulary.
class DecodeSession {
 public:
  virtual ~DecodeSession() = default;
  virtual std::vector<float> step(int token) = 0;
  virtual std::unique_ptr<DecodeSession> clone() const = 0;
};

/// Anything that can open decode sessions over an audio buffer. The real
/// implementation is ModelDecoder; tests substitute stubs.
class Decodable {
 public:
  virtual ~Decodable() = default;
  virtual std::unique_ptr<DecodeSession> open(const AudioBuffer& buf) const = 0;
  virtual int vocab_size() const = 0;
  virtual double max_tokens_per_second() const = 0;
};

class ModelDecoder final : public Decodable {
 public:
  explicit ModelDecoder(const Model& model) : model_(&model) {}

  std::unique_ptr<DecodeSession> open(const AudioBuffer& buf) const override;
  int vocab_size() const override { return model_->config().vocab_size; }
  double max_tokens_per_second() const override {
    return model_->config().max_tokens_per_second;
  }

 private:
  const Model* model_;
};

/// ceil(seconds * tokens_per_second) + 8.
int token_cap(double seconds, double tokens_per_second);

/// Index of the largest value; ties go to the lowest index.
int argmax(const std::vector<float>& logits);

/// Natural-log softmax computed in double with max subtraction.
std::vector<double> log_softmax(const std::vector<float>& logits);

DecodeResult greedy_decode(const Decodable& model, const Tokenizer& tokenizer,
                           const AudioBuffer& buf);
DecodeResult greedy_decode(const Model& model, const Tokenizer& tokenizer,
                           const AudioBuffer& buf);

/// Length-normalized beam search (score = log-prob / generated length,
/// end token counted). Candidates are ranked by cumulative log-prob, then
/// beam index, then token id, so width 1 reproduces greedy_decode.
DecodeResult beam_search(const Decodable& model, const Tokenizer& tokenizer,
                         const AudioBuffer& buf, int width);
DecodeResult beam_search(const Model& model, const Tokenizer& tokenizer,
                         const AudioBuffer& buf, int width);

}  // namespace tinyasr
