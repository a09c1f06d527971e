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

#include <gtest/gtest.h>

#include <cstring>
#include <limits>

#include "arner/bioes.h"
#include "json.hpp"
#include "oracles.h"
#include "test_util.h"

namespace arner {
namespace {

using json = nlohmann::json;

Checkpoint Sample(CellKind cell, bool with_adam) {
  ModelConfig cfg;
  cfg.cell = cell;
  cfg.vocab_size = 5;
  cfg.embed_dim = 3;
  cfg.hidden_dim = 2;
  cfg.seed = 77;
  Checkpoint c;
  c.tag_fingerprint = TagOrderingFingerprint();
  c.vocab = Vocabulary::FromTokens({"مدينة", "اشور", "x"});
  c.params = testing::RandomModel(cfg, 5);
  // Awkward values must survive bit for bit.
  c.params.dense_b[0] = -0.0;
  c.params.dense_b[1] = std::numeric_limits<double>::denorm_min();
  c.params.dense_b[2] = 0.1 + 0.2;
  if (with_adam) {
    AdamState s = AdamState::ForParams(c.params);
    s.m = testing::RandomModel(cfg, 6);
    s.v = testing::RandomModel(cfg, 7);
    s.step = 12;
    c.adam = s;
  }
  c.training = {12, 99, 0.01, 8, 40};
  return c;
}

void ExpectBitwiseEqual(const ModelParams& a, const ModelParams& b) {
  ASSERT_EQ(a.config, b.config);
  const auto ta = a.Tensors();
  const auto tb = b.Tensors();
  ASSERT_EQ(ta.size(), tb.size());
  for (size_t i = 0; i < ta.size(); ++i) {
    EXPECT_EQ(ta[i].name, tb[i].name);
    ASSERT_EQ(ta[i].data.size(), tb[i].data.size());
    EXPECT_EQ(std::memcmp(ta[i].data.data(), tb[i].data.data(),
                          ta[i].data.size() * sizeof(double)),
              0)
        << ta[i].name;
  }
}

struct Parts {
  json manifest;
  std::string payload;
};

Parts Split(const std::string& bytes) {
  const size_t l1 = bytes.find('\n');
  const size_t l2 = bytes.find('\n', l1 + 1);
  const size_t len = std::stoul(bytes.substr(l1 + 1, l2 - l1 - 1));
  return {json::parse(bytes.substr(l2 + 1, len)), bytes.substr(l2 + 2 + len)};
}

std::string Join(const Parts& p) {
  const std::string text = p.manifest.dump();
  return std::string(kCheckpointMagic) + "\n" + std::to_string(text.size()) +
         "\n" + text + "\n" + p.payload;
}

CheckpointError::Kind ParseErrorKind(const std::string& bytes,
                                     std::string* message = nullptr) {
  try {
    ParseCheckpoint(bytes);
  } catch (const CheckpointError& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "checkpoint parsed without error";
  return CheckpointError::Kind::kIo;
}

class CheckpointTest : public ::testing::TestWithParam<CellKind> {};

TEST_P(CheckpointTest, RoundTripIsBitExact) {
  for (bool adam : {false, true}) {
    const Checkpoint c = Sample(GetParam(), adam);
    const std::string bytes = SerializeCheckpoint(c);
    const Checkpoint back = ParseCheckpoint(bytes);
    ExpectBitwiseEqual(c.params, back.params);
    EXPECT_EQ(back.tag_fingerprint, c.tag_fingerprint);
    EXPECT_EQ(back.vocab.NonReservedTokens(), c.vocab.NonReservedTokens());
    EXPECT_EQ(back.training, c.training);
    ASSERT_EQ(back.adam.has_value(), adam);
    if (adam) {
      ExpectBitwiseEqual(c.adam->m, back.adam->m);
      ExpectBitwiseEqual(c.adam->v, back.adam->v);
      EXPECT_EQ(back.adam->step, 12);
    }
    EXPECT_EQ(SerializeCheckpoint(back), bytes);
  }
}

TEST_P(CheckpointTest, FileRoundTrip) {
  testing::TempDir dir("ckpt");
  const Checkpoint c = Sample(GetParam(), true);
  const auto path = dir.path() / "model.ckpt";
  SaveCheckpoint(c, path);
  EXPECT_EQ(testing::ReadFile(path), SerializeCheckpoint(c));
  ExpectBitwiseEqual(LoadCheckpoint(path, GetParam()).params, c.params);
}

TEST_P(CheckpointTest, WrongCellIsConfigMismatch) {
  testing::TempDir dir("ckpt");
  const auto path = dir.path() / "model.ckpt";
  SaveCheckpoint(Sample(GetParam(), false), path);
  const CellKind other =
      GetParam() == CellKind::kLstm ? CellKind::kGru : CellKind::kLstm;
  try {
    LoadCheckpoint(path, other);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), CheckpointError::Kind::kConfigMismatch);
  }
}

INSTANTIATE_TEST_SUITE_P(Cells, CheckpointTest,
                         ::testing::Values(CellKind::kLstm, CellKind::kGru),
                         [](const auto& info) {
                           return std::string(CellKindName(info.param));
                         });

TEST(CheckpointErrorTest, EditedShapeNamesTensor) {
  Parts p = Split(SerializeCheckpoint(Sample(CellKind::kLstm, false)));
  for (json& t : p.manifest["tensors"]) {
    if (t["name"] == "lstm.forget.R") t["rows"] = 3;
  }
  std::string message;
  EXPECT_EQ(ParseErrorKind(Join(p), &message),
            CheckpointError::Kind::kShapeMismatch);
  EXPECT_NE(message.find("lstm.forget.R"), std::string::npos) << message;
}

TEST(CheckpointErrorTest, BadOffset) {
  Parts p = Split(SerializeCheckpoint(Sample(CellKind::kGru, false)));
  p.manifest["tensors"][2]["offset"] = 8;
  EXPECT_EQ(ParseErrorKind(Join(p)), CheckpointError::Kind::kShapeMismatch);
}

TEST(CheckpointErrorTest, TruncatedPayload) {
  const std::string bytes = SerializeCheckpoint(Sample(CellKind::kLstm, true));
  EXPECT_EQ(ParseErrorKind(bytes.substr(0, bytes.size() - 8)),
            CheckpointError::Kind::kTruncated);
  EXPECT_EQ(ParseErrorKind(bytes.substr(0, 30)),
            CheckpointError::Kind::kTruncated);
  EXPECT_EQ(ParseErrorKind(bytes + "x"), CheckpointError::Kind::kFormat);
}

TEST(CheckpointErrorTest, VersionMismatch) {
  Parts p = Split(SerializeCheckpoint(Sample(CellKind::kLstm, false)));
  p.manifest["format_version"] = kCheckpointFormatVersion + 1;
  EXPECT_EQ(ParseErrorKind(Join(p)), CheckpointError::Kind::kVersion);
}

TEST(CheckpointErrorTest, BadMagicAndManifest) {
  EXPECT_EQ(ParseErrorKind("NOT-A-CHECKPOINT\n3\n{}\n"),
            CheckpointError::Kind::kFormat);
  EXPECT_EQ(ParseErrorKind(""), CheckpointError::Kind::kFormat);
  EXPECT_EQ(ParseErrorKind(std::string(kCheckpointMagic) + "\nabc\n"),
            CheckpointError::Kind::kFormat);
  EXPECT_EQ(ParseErrorKind(std::string(kCheckpointMagic) + "\n3\n[1}\n"),
            CheckpointError::Kind::kFormat);
  Parts p = Split(SerializeCheckpoint(Sample(CellKind::kGru, false)));
  p.manifest.erase("model");
  EXPECT_EQ(ParseErrorKind(Join(p)), CheckpointError::Kind::kFormat);
}

TEST(CheckpointErrorTest, MissingFileIsIo) {
  try {
    LoadCheckpoint("/nonexistent/dir/model.ckpt");
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), CheckpointError::Kind::kIo);
  }
}

TEST(CheckCompatibleTest, LabelSpace) {
  Checkpoint c = Sample(CellKind::kLstm, false);
  EXPECT_NO_THROW(CheckCompatible(c));
  Parts p = Split(SerializeCheckpoint(c));
  p.manifest["tag_fingerprint"] = "O,S-PER";
  try {
    CheckCompatible(ParseCheckpoint(Join(p)));
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), CheckpointError::Kind::kConfigMismatch);
  }

  c.params = ModelParams::Zeros([] {
    ModelConfig cfg;
    cfg.vocab_size = 5;
    cfg.num_classes = 5;
    return cfg;
  }());
  EXPECT_THROW(CheckCompatible(c), CheckpointError);
}

}  // namespace
}  // namespace arner
