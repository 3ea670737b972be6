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

#include "tinyasr/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

#include "json.hpp"
#include "tinyasr/random.hpp"

namespace tinyasr {

using ordered_json = nlohmann::ordered_json;

std::int64_t TensorRecord::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1},
                         std::multiplies<>());
}

void TensorStore::add(TensorRecord record) {
  if (index_.count(record.name)) {
    throw CheckpointError(CheckpointErrc::kDuplicateName,
                          "duplicate tensor name: " + record.name);
  }
  for (std::int64_t dim : record.shape) {
    if (dim <= 0) {
      throw CheckpointError(CheckpointErrc::kShapeMismatch,
                            "non-positive dimension in tensor " + record.name);
    }
  }
  if (record.numel() != static_cast<std::int64_t>(record.data.size())) {
    throw CheckpointError(CheckpointErrc::kShapeMismatch,
                          "shape/data size mismatch in tensor " + record.name);
  }
  index_.emplace(record.name, tensors_.size());
  tensors_.push_back(std::move(record));
}

const TensorRecord* TensorStore::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &tensors_[it->second];
}

const TensorRecord& TensorStore::at(const std::string& name) const {
  const TensorRecord* r = find(name);
  if (r == nullptr) {
    throw CheckpointError(CheckpointErrc::kMissingTensor, "missing tensor: " + name);
  }
  return *r;
}

std::int64_t TensorStore::total_elements() const {
  std::int64_t n = 0;
  for (const TensorRecord& t : tensors_) n += t.numel();
  return n;
}

std::vector<std::uint8_t> serialize(const TensorStore& store) {
  ordered_json header = ordered_json::object();
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : store.metadata()) meta[k] = v;
  header["__metadata__"] = std::move(meta);

  std::uint64_t offset = 0;
  for (const TensorRecord& t : store.tensors()) {
    const std::uint64_t length = t.data.size() * sizeof(float);
    header[t.name] = {{"dtype", "f32"},
                      {"shape", t.shape},
                      {"offset", offset},
                      {"length", length}};
    offset += length;
  }
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(8 + text.size() + offset);
  const std::uint64_t n = text.size();
  std::memcpy(out.data(), &n, 8);
  std::memcpy(out.data() + 8, text.data(), text.size());
  std::uint8_t* payload = out.data() + 8 + text.size();
  for (const TensorRecord& t : store.tensors()) {
    std::memcpy(payload, t.data.data(), t.data.size() * sizeof(float));
    payload += t.data.size() * sizeof(float);
  }
  return out;
}

TensorStore deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) {
    throw CheckpointError(CheckpointErrc::kTruncated,
                          "file shorter than the 8-byte header length");
  }
  std::uint64_t n = 0;
  std::memcpy(&n, bytes.data(), 8);
  if (n > bytes.size() - 8) {
    throw CheckpointError(CheckpointErrc::kTruncated,
                          "header length " + std::to_string(n) +
                              " exceeds file size " + std::to_string(bytes.size()));
  }
  const std::uint8_t* payload = bytes.data() + 8 + n;
  const std::uint64_t payload_size = bytes.size() - 8 - n;

  ordered_json header;
  try {
    header = ordered_json::parse(bytes.begin() + 8, bytes.begin() + 8 + n);
  } catch (const nlohmann::json::parse_error& e) {
    throw CheckpointError(CheckpointErrc::kMalformedHeader,
                          std::string("header is not valid JSON: ") + e.what());
  }
  if (!header.is_object()) {
    throw CheckpointError(CheckpointErrc::kMalformedHeader,
                          "header must be a JSON object");
  }

  TensorStore store;
  struct Extent {
    std::uint64_t begin, end;
    std::string name;
  };
  std::vector<Extent> extents;

  for (const auto& [name, entry] : header.items()) {
    if (name == "__metadata__") {
      if (!entry.is_object()) {
        throw CheckpointError(CheckpointErrc::kMalformedHeader,
                              "__metadata__ must be an object");
      }
      for (const auto& [k, v] : entry.items()) {
        if (!v.is_string()) {
          throw CheckpointError(CheckpointErrc::kMalformedHeader,
                                "metadata value for '" + k + "' must be a string");
        }
        store.metadata()[k] = v.get<std::string>();
      }
      continue;
    }
    TensorRecord rec;
    rec.name = name;
    std::uint64_t offset = 0, length = 0;
    try {
      const std::string dtype = entry.at("dtype").get<std::string>();
      if (dtype != "f32") {
        throw CheckpointError(CheckpointErrc::kUnknownDtype,
                              "tensor " + name + " has unknown dtype '" + dtype + "'");
      }
      rec.shape = entry.at("shape").get<std::vector<std::int64_t>>();
      offset = entry.at("offset").get<std::uint64_t>();
      length = entry.at("length").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(CheckpointErrc::kMalformedHeader,
                            "tensor " + name + ": " + e.what());
    }
    std::int64_t numel = 1;
    for (std::int64_t dim : rec.shape) {
      if (dim <= 0) {
        throw CheckpointError(CheckpointErrc::kMalformedHeader,
                              "tensor " + name + " has a non-positive dimension");
      }
      numel *= dim;
    }
    if (length != static_cast<std::uint64_t>(numel) * sizeof(float)) {
      throw CheckpointError(CheckpointErrc::kMalformedHeader,
                            "tensor " + name + " length does not match its shape");
    }
    if (offset > payload_size || length > payload_size - offset) {
      throw CheckpointError(CheckpointErrc::kTruncated,
                            "tensor " + name + " extends past the end of the file");
    }
    rec.data.resize(static_cast<std::size_t>(numel));
    std::memcpy(rec.data.data(), payload + offset, length);
    extents.push_back({offset, offset + length, name});
    try {
      store.add(std::move(rec));
    } catch (const CheckpointError& e) {
      throw CheckpointError(CheckpointErrc::kMalformedHeader, e.what());
    }
  }

  std::sort(extents.begin(), extents.end(),
            [](const Extent& a, const Extent& b) { return a.begin < b.begin; });
  for (std::size_t i = 1; i < extents.size(); ++i) {
    if (extents[i].begin < extents[i - 1].end) {
      throw CheckpointError(CheckpointErrc::kBadLayout,
                            "tensors " + extents[i - 1].name + " and " +
                                extents[i].name + " overlap");
    }
  }
  return store;
}

void save(const TensorStore& store, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw CheckpointError(CheckpointErrc::kIo, "cannot write " + path.string());
  }
}

TensorStore load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError(CheckpointErrc::kIo, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

TensorStore init_random(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  TensorStore store;
  store.metadata()["config"] = config_to_json(config);
  for (TensorSpec& spec : parameter_layout(config)) {
    TensorRecord rec;
    rec.name = std::move(spec.name);
    rec.shape = std::move(spec.shape);
    rec.data.resize(static_cast<std::size_t>(rec.numel()));
    const CounterStream stream(mix64(seed) ^ fnv1a64(rec.name));
    for (std::size_t i = 0; i < rec.data.size(); ++i) {
      rec.data[i] = static_cast<float>(0.1 * stream.unit(i) - 0.05);
    }
    store.add(std::move(rec));
  }
  return store;
}

ModelConfig config_of(const TensorStore& store) {
  auto it = store.metadata().find("config");
  if (it == store.metadata().end()) {
    throw CheckpointError(CheckpointErrc::kMalformedHeader,
                          "checkpoint metadata has no \"config\" entry");
  }
  return config_from_json(it->second);
}

}  // namespace tinyasr
