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

#include "tinyasr/tokenizer.hpp"

#include <unicode/unistr.h>
#include <unicode/ustring.h>

#include <boost/beast/core/detail/base64.hpp>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tinyasr {
namespace {

namespace b64 = boost::beast::detail::base64;

std::string encode_base64(const std::string& bytes) {
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::string decode_base64(const std::string& text) {
  std::string out(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  // decode() stops at padding; anything after it other than '=' is invalid.
  if (text.find_first_not_of('=', read) != std::string::npos) {
    throw TokenizerError(TokenizerErrc::kParse, "invalid base64 piece: " + text);
  }
  out.resize(written);
  return out;
}

}  // namespace

std::string sanitize_utf8(const std::string& bytes) {
  if (bytes.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  int32_t subs = 0;
  u_strFromUTF8WithSub(nullptr, 0, &needed, bytes.data(),
                       static_cast<int32_t>(bytes.size()), 0xFFFD, &subs, &status);
  std::u16string utf16(static_cast<std::size_t>(needed), u'\0');
  status = U_ZERO_ERROR;
  u_strFromUTF8WithSub(reinterpret_cast<UChar*>(utf16.data()), needed, nullptr,
                       bytes.data(), static_cast<int32_t>(bytes.size()), 0xFFFD,
                       &subs, &status);
  if (U_FAILURE(status)) {
    throw TokenizerError(TokenizerErrc::kInvalid,
                         std::string("UTF-8 decode failed: ") + u_errorName(status));
  }
  std::string out;
  icu::UnicodeString(reinterpret_cast<const UChar*>(utf16.data()), needed)
      .toUTF8String(out);
  return out;
}

Tokenizer::Tokenizer(std::vector<std::string> pieces, int start_id, int end_id)
    : pieces_(std::move(pieces)), start_id_(start_id), end_id_(end_id) {
  const int n = size();
  if (start_id_ < 0 || start_id_ >= n || end_id_ < 0 || end_id_ >= n) {
    throw TokenizerError(TokenizerErrc::kInvalid, "special ids outside the vocabulary");
  }
  if (start_id_ == end_id_) {
    throw TokenizerError(TokenizerErrc::kInvalid, "start_id and end_id must differ");
  }
}

Tokenizer Tokenizer::byte_level(int vocab_size) {
  if (vocab_size < 258) {
    throw TokenizerError(TokenizerErrc::kInvalid,
                         "byte-level tokenizer needs a vocabulary of at least 258");
  }
  std::vector<std::string> pieces(static_cast<std::size_t>(vocab_size));
  for (int b = 0; b < 256; ++b) pieces[b] = std::string(1, static_cast<char>(b));
  return Tokenizer(std::move(pieces), 256, 257);
}

const std::string& Tokenizer::piece(int id) const {
  if (id < 0 || id >= size()) {
    throw TokenizerError(TokenizerErrc::kUnknownId,
                         "unknown token id " + std::to_string(id));
  }
  return pieces_[static_cast<std::size_t>(id)];
}

std::string Tokenizer::detokenize(std::span<const int> ids) const {
  std::string bytes;
  for (int id : ids) bytes += piece(id);
  return sanitize_utf8(bytes);
}

Tokenizer Tokenizer::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TokenizerError(TokenizerErrc::kParse, std::string("tokenizer JSON: ") + e.what());
  }
  try {
    const auto& tokens = j.at("tokens");
    const int start = j.at("specials").at("start_id").get<int>();
    const int end = j.at("specials").at("end_id").get<int>();
    int max_id = std::max(start, end);
    for (const auto& [key, _] : tokens.items()) {
      std::size_t used = 0;
      const int id = std::stoi(key, &used);
      if (used != key.size() || id < 0) {
        throw TokenizerError(TokenizerErrc::kParse, "bad token id key: " + key);
      }
      max_id = std::max(max_id, id);
    }
    std::vector<std::string> pieces(static_cast<std::size_t>(max_id) + 1);
    std::vector<bool> seen(pieces.size(), false);
    for (const auto& [key, value] : tokens.items()) {
      const auto id = static_cast<std::size_t>(std::stoi(key));
      pieces[id] = decode_base64(value.get<std::string>());
      seen[id] = true;
    }
    for (std::size_t id = 0; id < seen.size(); ++id) {
      if (!seen[id] && static_cast<int>(id) != start && static_cast<int>(id) != end) {
        throw TokenizerError(TokenizerErrc::kInvalid,
                             "token ids are not dense: missing id " + std::to_string(id));
      }
    }
    return Tokenizer(std::move(pieces), start, end);
  } catch (const nlohmann::json::exception& e) {
    throw TokenizerError(TokenizerErrc::kParse, std::string("tokenizer field: ") + e.what());
  } catch (const std::logic_error& e) {
    throw TokenizerError(TokenizerErrc::kParse, std::string("tokenizer id: ") + e.what());
  }
}

std::string Tokenizer::to_json() const {
  nlohmann::ordered_json tokens = nlohmann::ordered_json::object();
  for (int id = 0; id < size(); ++id) {
    tokens[std::to_string(id)] = encode_base64(pieces_[id]);
  }
  nlohmann::ordered_json j;
  j["tokens"] = std::move(tokens);
  j["specials"] = {{"start_id", start_id_}, {"end_id", end_id_}};
  return j.dump(1);
}

Tokenizer Tokenizer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw TokenizerError(TokenizerErrc::kIo, "cannot open tokenizer file: " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Tokenizer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  out << to_json() << '\n';
  if (!out) {
    throw TokenizerError(TokenizerErrc::kIo, "cannot write tokenizer file: " + path.string());
  }
}

}  // namespace tinyasr
