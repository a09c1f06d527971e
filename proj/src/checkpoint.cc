// Copyright 2026 The arner Authors.
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

#include "arner/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "arner/bioes.h"
#include "json.hpp"

namespace arner {

namespace {

using json = nlohmann::json;
using Kind = CheckpointError::Kind;

static_assert(std::numeric_limits<double>::is_iec559);

void AppendLittleEndian(std::span<const double> values, std::string* out) {
  for (double d : values) {
    uint64_t bits = std::bit_cast<uint64_t>(d);
    for (int b = 0; b < 8; ++b) {
      out->push_back(static_cast<char>(bits & 0xFF));
      bits >>= 8;
    }
  }
}

void ReadLittleEndian(std::string_view bytes, std::span<double> out) {
  for (size_t i = 0; i < out.size(); ++i) {
    uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) {
      bits = (bits << 8) | static_cast<uint8_t>(bytes[i * 8 + b]);
    }
    out[i] = std::bit_cast<double>(bits);
  }
}

std::vector<ConstTensorView> AllTensors(const Checkpoint& c) {
  std::vector<ConstTensorView> out = c.params.Tensors();
  if (c.adam) {
    for (ConstTensorView t : c.adam->m.Tensors()) {
      t.name = "adam.m." + t.name;
      out.push_back(std::move(t));
    }
    for (ConstTensorView t : c.adam->v.Tensors()) {
      t.name = "adam.v." + t.name;
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<TensorView> AllTensors(Checkpoint& c) {
  std::vector<TensorView> out = c.params.Tensors();
  if (c.adam) {
    for (TensorView t : c.adam->m.Tensors()) {
      t.name = "adam.m." + t.name;
      out.push_back(std::move(t));
    }
    for (TensorView t : c.adam->v.Tensors()) {
      t.name = "adam.v." + t.name;
      out.push_back(std::move(t));
    }
  }
  return out;
}

json ConfigToJson(const ModelConfig& m) {
  return json{{"cell", std::string(CellKindName(m.cell))},
              {"vocab_size", m.vocab_size},
              {"embed_dim", m.embed_dim},
              {"hidden_dim", m.hidden_dim},
              {"num_classes", m.num_classes},
              {"seed", m.seed},
              {"relu_head", m.relu_head}};
}

ModelConfig ConfigFromJson(const json& j) {
  ModelConfig m;
  m.cell = ParseCellKind(j.at("cell").get<std::string>());
  m.vocab_size = j.at("vocab_size").get<int>();
  m.embed_dim = j.at("embed_dim").get<int>();
  m.hidden_dim = j.at("hidden_dim").get<int>();
  m.num_classes = j.at("num_classes").get<int>();
  m.seed = j.at("seed").get<uint64_t>();
  m.relu_head = j.at("relu_head").get<bool>();
  m.Validate();
  return m;
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& c) {
  json tags = json::array();
  for (TagId id = 0; id < kNumTags; ++id) tags.push_back(TagToString(IdToTag(id)));

  json tensors = json::array();
  std::string payload;
  for (const ConstTensorView& t : AllTensors(c)) {
    tensors.push_back({{"name", t.name},
                       {"rows", t.rows},
                       {"cols", t.cols},
                       {"offset", payload.size()},
                       {"bytes", t.data.size() * 8}});
    AppendLittleEndian(t.data, &payload);
  }

  json manifest = {
      {"format_version", c.format_version},
      {"model", ConfigToJson(c.config())},
      {"tags", tags},
      {"tag_fingerprint", c.tag_fingerprint},
      {"vocabulary", c.vocab.NonReservedTokens()},
      {"training",
       {{"iterations_completed", c.training.iterations_completed},
        {"seed", c.training.seed},
        {"learning_rate", c.training.learning_rate},
        {"batch_size", c.training.batch_size},
        {"max_len", c.training.max_len}}},
      {"adam", c.adam ? json{{"step", c.adam->step}} : json(nullptr)},
      {"tensors", tensors},
      {"payload_bytes", payload.size()},
  };
  const std::string text = manifest.dump();

  std::string out;
  out.reserve(text.size() + payload.size() + 64);
  out += kCheckpointMagic;
  out += '\n';
  out += std::to_string(text.size());
  out += '\n';
  out += text;
  out += '\n';
  out += payload;
  return out;
}

Checkpoint ParseCheckpoint(std::string_view bytes) {
  const std::string magic = std::string(kCheckpointMagic) + "\n";
  if (bytes.substr(0, magic.size()) != magic) {
    throw CheckpointError(Kind::kFormat, "not a checkpoint (bad magic)");
  }
  bytes.remove_prefix(magic.size());
  const size_t nl = bytes.find('\n');
  if (nl == std::string_view::npos || nl == 0 || nl > 20) {
    throw CheckpointError(Kind::kFormat, "missing manifest length");
  }
  size_t manifest_len = 0;
  for (char ch : bytes.substr(0, nl)) {
    if (ch < '0' || ch > '9') {
      throw CheckpointError(Kind::kFormat, "bad manifest length");
    }
    manifest_len = manifest_len * 10 + static_cast<size_t>(ch - '0');
  }
  bytes.remove_prefix(nl + 1);
  if (bytes.size() < manifest_len + 1) {
    throw CheckpointError(Kind::kTruncated, "manifest truncated");
  }
  json manifest;
  try {
    manifest = json::parse(bytes.substr(0, manifest_len));
  } catch (const json::exception& e) {
    throw CheckpointError(Kind::kFormat,
                          std::string("unparsable manifest: ") + e.what());
  }
  if (bytes[manifest_len] != '\n') {
    throw CheckpointError(Kind::kFormat, "manifest not newline-terminated");
  }
  const std::string_view payload = bytes.substr(manifest_len + 1);

  Checkpoint c;
  try {
    c.format_version = manifest.at("format_version").get<int>();
    if (c.format_version != kCheckpointFormatVersion) {
      throw CheckpointError(
          Kind::kVersion,
          "unsupported checkpoint version " +
              std::to_string(c.format_version) + " (expected " +
              std::to_string(kCheckpointFormatVersion) + ")");
    }
    const ModelConfig config = ConfigFromJson(manifest.at("model"));
    c.tag_fingerprint = manifest.at("tag_fingerprint").get<std::string>();
    c.vocab = Vocabulary::FromTokens(
        manifest.at("vocabulary").get<std::vector<std::string>>());
    const json& tr = manifest.at("training");
    c.training.iterations_completed = tr.at("iterations_completed").get<int64_t>();
    c.training.seed = tr.at("seed").get<uint64_t>();
    c.training.learning_rate = tr.at("learning_rate").get<double>();
    c.training.batch_size = tr.at("batch_size").get<int>();
    c.training.max_len = tr.at("max_len").get<int>();
    c.params = ModelParams::Zeros(config);
    if (!manifest.at("adam").is_null()) {
      c.adam = AdamState::ForParams(c.params);
      c.adam->step = manifest.at("adam").at("step").get<int64_t>();
    }

    const json& dir = manifest.at("tensors");
    std::vector<TensorView> expected = AllTensors(c);
    if (dir.size() != expected.size()) {
      throw CheckpointError(Kind::kShapeMismatch,
                            "tensor directory lists " +
                                std::to_string(dir.size()) + " tensors, " +
                                "configuration needs " +
                                std::to_string(expected.size()));
    }
    const size_t declared_payload = manifest.at("payload_bytes").get<size_t>();
    size_t next_offset = 0;
    for (size_t i = 0; i < expected.size(); ++i) {
      const json& entry = dir[i];
      TensorView& t = expected[i];
      const std::string name = entry.at("name").get<std::string>();
      if (name != t.name) {
        throw CheckpointError(Kind::kShapeMismatch,
                              "tensor " + std::to_string(i) + " is '" + name +
                                  "', expected '" + t.name + "'");
      }
      const size_t rows = entry.at("rows").get<size_t>();
      const size_t cols = entry.at("cols").get<size_t>();
      const size_t offset = entry.at("offset").get<size_t>();
      const size_t nbytes = entry.at("bytes").get<size_t>();
      if (rows != t.rows || cols != t.cols) {
        throw CheckpointError(Kind::kShapeMismatch,
                              "tensor '" + name + "' has shape " +
                                  ShapeString(rows, cols) + ", expected " +
                                  ShapeString(t.rows, t.cols));
      }
      if (nbytes != rows * cols * 8 || offset != next_offset) {
        throw CheckpointError(Kind::kShapeMismatch,
                              "tensor '" + name +
                                  "' offset/length inconsistent with shape");
      }
      next_offset = offset + nbytes;
      if (payload.size() < next_offset) {
        throw CheckpointError(Kind::kTruncated,
                              "payload truncated inside tensor '" + name + "'");
      }
      ReadLittleEndian(payload.substr(offset, nbytes), t.data);
    }
    if (declared_payload != next_offset) {
      throw CheckpointError(Kind::kShapeMismatch,
                            "payload_bytes disagrees with tensor directory");
    }
    if (payload.size() > next_offset) {
      throw CheckpointError(Kind::kFormat, "trailing bytes after payload");
    }
  } catch (const json::exception& e) {
    throw CheckpointError(Kind::kFormat,
                          std::string("malformed manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(Kind::kFormat,
                          std::string("malformed manifest: ") + e.what());
  }
  return c;
}

void SaveCheckpoint(const Checkpoint& c, const std::filesystem::path& path) {
  const std::string bytes = SerializeCheckpoint(c);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CheckpointError(Kind::kIo, "cannot open '" + path.string() +
                                         "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw CheckpointError(Kind::kIo, "write to '" + path.string() + "' failed");
  }
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          std::optional<CellKind> expected_cell) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError(Kind::kIo, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  Checkpoint c = ParseCheckpoint(ss.str());
  if (expected_cell && c.config().cell != *expected_cell) {
    throw CheckpointError(
        Kind::kConfigMismatch,
        "checkpoint holds a " + std::string(CellKindName(c.config().cell)) +
            " model, expected " + std::string(CellKindName(*expected_cell)));
  }
  return c;
}

void CheckCompatible(const Checkpoint& c) {
  if (c.tag_fingerprint != TagOrderingFingerprint()) {
    throw CheckpointError(Kind::kConfigMismatch,
                          "checkpoint tag ordering differs from this build");
  }
  if (c.vocab.size() != c.config().vocab_size) {
    throw CheckpointError(Kind::kConfigMismatch,
                          "vocabulary size " + std::to_string(c.vocab.size()) +
                              " differs from model vocab_size " +
                              std::to_string(c.config().vocab_size));
  }
  if (c.config().num_classes != kNumTags) {
    throw CheckpointError(Kind::kConfigMismatch,
                          "model has " + std::to_string(c.config().num_classes) +
                              " classes, label space has " +
                              std::to_string(kNumTags));
  }
}

}  // namespace arner
