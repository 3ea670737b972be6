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

#include "tinyasr/decode.hpp"

#include <algorithm>
#include <cmath>

namespace tinyasr {
namespace {

class ModelSession final : public DecodeSession {
 public:
  ModelSession(const Model& model, DecoderCache cache)
      : model_(&model), cache_(std::move(cache)) {}

  std::vector<float> step(int token) override {
    return model_->decoder_step(token, cache_.length, cache_);
  }
  std::unique_ptr<DecodeSession> clone() const override {
    return std::make_unique<ModelSession>(*this);
  }

 private:
  const Model* model_;
  DecoderCache cache_;
};

void check_vocab(const Decodable& model, const Tokenizer& tokenizer) {
  if (tokenizer.size() != model.vocab_size()) {
    throw DecodeError(DecodeErrc::kVocabularyMismatch,
                      "tokenizer has " + std::to_string(tokenizer.size()) +
                          " ids but the model vocabulary is " +
                          std::to_string(model.vocab_size()));
  }
}

void check_logits(const std::vector<float>& logits, int vocab_size) {
  if (static_cast<int>(logits.size()) != vocab_size) {
    throw DecodeError(DecodeErrc::kInvalidArgument,
                      "decoder returned " + std::to_string(logits.size()) +
                          " logits for a vocabulary of " + std::to_string(vocab_size));
  }
}

}  // namespace

std::unique_ptr<DecodeSession> ModelDecoder::open(const AudioBuffer& buf) const {
  return std::make_unique<ModelSession>(*model_,
                                        model_->start_decoding(model_->encode(buf)));
}

int token_cap(double seconds, double tokens_per_second) {
  return static_cast<int>(std::ceil(seconds * tokens_per_second)) + 8;
}

int argmax(const std::vector<float>& logits) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(logits.size()); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

std::vector<double> log_softmax(const std::vector<float>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (float v : logits) sum += std::exp(static_cast<double>(v) - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

DecodeResult greedy_decode(const Decodable& model, const Tokenizer& tokenizer,
                           const AudioBuffer& buf) {
  check_vocab(model, tokenizer);
  const int cap = token_cap(duration_seconds(buf), model.max_tokens_per_second());
  std::unique_ptr<DecodeSession> session = model.open(buf);

  DecodeResult result;
  result.stopped_by = StopReason::kLengthCap;
  int token = tokenizer.start_id();
  while (static_cast<int>(result.token_ids.size()) < cap) {
    const std::vector<float> logits = session->step(token);
    check_logits(logits, model.vocab_size());
    ++result.steps;
    token = argmax(logits);
    result.log_prob += log_softmax(logits)[token];
    if (token == tokenizer.end_id()) {
      result.stopped_by = StopReason::kEndToken;
      break;
    }
    result.token_ids.push_back(token);
  }
  result.text = tokenizer.detokenize(result.token_ids);
  return result;
}

DecodeResult greedy_decode(const Model& model, const Tokenizer& tokenizer,
                           const AudioBuffer& buf) {
  return greedy_decode(ModelDecoder(model), tokenizer, buf);
}

DecodeResult beam_search(const Decodable& model, const Tokenizer& tokenizer,
                         const AudioBuffer& buf, int width) {
  if (width < 1) {
    throw DecodeError(DecodeErrc::kInvalidArgument,
                      "beam width must be >= 1, got " + std::to_string(width));
  }
  check_vocab(model, tokenizer);
  const int cap = token_cap(duration_seconds(buf), model.max_tokens_per_second());
  const int end_id = tokenizer.end_id();

  struct Beam {
    std::vector<int> tokens;
    double log_prob = 0.0;
    std::unique_ptr<DecodeSession> session;
  };
  struct Finished {
    std::vector<int> tokens;
    double log_prob;
    StopReason reason;
    double score() const {
      const std::size_t len = tokens.size() + (reason == StopReason::kEndToken ? 1 : 0);
      return log_prob / static_cast<double>(std::max<std::size_t>(len, 1));
    }
  };
  struct Candidate {
    double log_prob;
    int beam;
    int token;
  };

  std::vector<Beam> beams;
  beams.push_back({{}, 0.0, model.open(buf)});
  std::vector<Finished> finished;

  while (!beams.empty() && static_cast<int>(finished.size()) < width) {
    std::vector<Candidate> candidates;
    for (int b = 0; b < static_cast<int>(beams.size()); ++b) {
      Beam& beam = beams[b];
      const int last = beam.tokens.empty() ? tokenizer.start_id() : beam.tokens.back();
      const std::vector<float> logits = beam.session->step(last);
      check_logits(logits, model.vocab_size());
      const std::vector<double> lp = log_softmax(logits);
      for (int t = 0; t < static_cast<int>(lp.size()); ++t) {
        candidates.push_back({beam.log_prob + lp[t], b, t});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                if (a.beam != b.beam) return a.beam < b.beam;
                return a.token < b.token;
              });

    std::vector<Beam> next;
    for (int rank = 0; rank < static_cast<int>(candidates.size()); ++rank) {
      const Candidate& c = candidates[rank];
      if (static_cast<int>(next.size()) == width) break;
      const Beam& parent = beams[c.beam];
      if (c.token == end_id) {
        // Only an end token ranked within the top `width` completes a hypothesis.
        if (rank < width) {
          finished.push_back({parent.tokens, c.log_prob, StopReason::kEndToken});
        }
        continue;
      }
      Beam child{parent.tokens, c.log_prob, parent.session->clone()};
      child.tokens.push_back(c.token);
      next.push_back(std::move(child));
    }
    beams.clear();
    for (Beam& b : next) {
      if (static_cast<int>(b.tokens.size()) >= cap) {
        finished.push_back({std::move(b.tokens), b.log_prob, StopReason::kLengthCap});
      } else {
        beams.push_back(std::move(b));
      }
    }
  }

  const Finished* best = nullptr;
  for (const Finished& f : finished) {
    if (best == nullptr || f.score() > best->score()) best = &f;
  }
  DecodeResult result;
  if (best != nullptr) {
    result.token_ids = best->tokens;
    result.log_prob = best->log_prob;
    result.stopped_by = best->reason;
    result.steps = static_cast<int>(best->tokens.size()) +
                   (best->reason == StopReason::kEndToken ? 1 : 0);
  }
  result.text = tokenizer.detokenize(result.token_ids);
  return result;
}

DecodeResult beam_search(const Model& model, const Tokenizer& tokenizer,
                         const AudioBuffer& buf, int width) {
  return beam_search(ModelDecoder(model), tokenizer, buf, width);
}

}  // namespace tinyasr
