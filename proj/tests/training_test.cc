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

#include "arner/training.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "arner/evaluation.h"
#include "arner/optimizer.h"
#include "test_util.h"

namespace arner {
namespace {

Matrix Uniform(size_t rows, size_t k) {
  return Matrix(rows, k, -std::log(static_cast<double>(k)));
}

TEST(CrossEntropyLossTest, Examples) {
  const std::vector<int> gold = {0, 36, 5};
  const std::vector<uint8_t> mask(3, 1);
  EXPECT_NEAR(CrossEntropyLoss(Uniform(3, 37), gold, mask).loss,
              3.6109179126442243, 1e-12);

  Matrix certain(3, 37, -std::numeric_limits<double>::infinity());
  for (size_t t = 0; t < 3; ++t) certain(t, gold[t]) = 0.0;
  EXPECT_EQ(CrossEntropyLoss(certain, gold, mask).loss, 0.0);

  const Matrix two = {{std::log(0.75), std::log(0.25)},
                      {std::log(0.25), std::log(0.75)}};
  const std::vector<uint8_t> full = {1, 1};
  EXPECT_NEAR(CrossEntropyLoss(two, std::vector<int>{0, 0}, full).loss,
              0.8369882167858358, 1e-15);
}

TEST(CrossEntropyLossTest, GradientAndMask) {
  const std::vector<int> gold = {1, 2, 0, 3};
  const std::vector<uint8_t> mask = {1, 0, 1, 0};
  Matrix lp = Uniform(4, 4);
  const LossResult a = CrossEntropyLoss(lp, gold, mask);
  EXPECT_EQ(a.d_log_probs(0, 1), -0.5);
  EXPECT_EQ(a.d_log_probs(2, 0), -0.5);
  double nonzero = 0;
  for (double x : a.d_log_probs.span()) nonzero += x != 0.0;
  EXPECT_EQ(nonzero, 2);

  lp(1, 2) = -50.0;
  lp(3, 0) = 0.0;
  EXPECT_EQ(CrossEntropyLoss(lp, gold, mask).loss, a.loss);
  EXPECT_EQ(TokenAccuracy(lp, gold, mask),
            TokenAccuracy(Uniform(4, 4), gold, mask));
}

TEST(CrossEntropyLossTest, Errors) {
  const std::vector<uint8_t> none(2, 0);
  EXPECT_THROW(CrossEntropyLoss(Uniform(2, 3), std::vector<int>{0, 1}, none),
               std::invalid_argument);
  const std::vector<uint8_t> full(2, 1);
  EXPECT_THROW(CrossEntropyLoss(Uniform(2, 3), std::vector<int>{0, 3}, full),
               std::invalid_argument);
  EXPECT_THROW(CrossEntropyLoss(Uniform(2, 3), std::vector<int>{0}, full),
               std::invalid_argument);
  EXPECT_THROW(TokenAccuracy(Uniform(2, 3), std::vector<int>{0, 1}, none),
               std::invalid_argument);
}

TEST(TokenAccuracyTest, Examples) {
  const Matrix lp = {{-0.1, -3.0, -4.0}, {-2.0, -0.2, -3.0}, {-0.3, -2.0, -2.5}};
  const std::vector<uint8_t> mask(3, 1);
  EXPECT_DOUBLE_EQ(TokenAccuracy(lp, std::vector<int>{0, 1, 2}, mask),
                   2.0 / 3.0);
  EXPECT_EQ(TokenAccuracy(lp, std::vector<int>{0, 1, 0}, mask), 1.0);

  Matrix shifted = lp;
  for (double& x : shifted.span()) x += 7.25;
  EXPECT_EQ(TokenAccuracy(shifted, std::vector<int>{0, 1, 2}, mask),
            2.0 / 3.0);
}

TEST(TokenAccuracyTest, ArgMaxTiesPickLowestId) {
  EXPECT_EQ(ArgMax(std::vector<double>{1.0, 3.0, 3.0, 2.0}), 1);
  EXPECT_EQ(ArgMax(std::vector<double>{0.0, 0.0}), 0);
}

ModelParams Scalar(double value) {
  ModelConfig cfg;
  cfg.vocab_size = 2;
  cfg.embed_dim = 1;
  cfg.hidden_dim = 1;
  cfg.num_classes = 1;
  ModelParams p = ModelParams::Zeros(cfg);
  for (TensorView& t : p.Tensors()) {
    for (double& x : t.data) x = value;
  }
  return p;
}

TEST(AdamTest, ZeroGradientLeavesParams) {
  ModelParams p = Scalar(0.3);
  const ModelParams before = p;
  AdamState s = AdamState::ForParams(p);
  AdamStep(&p, Scalar(0.0), &s, AdamConfig{});
  EXPECT_EQ(s.step, 1);
  EXPECT_EQ(p.embedding, before.embedding);
  EXPECT_EQ(p.dense_w, before.dense_w);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  ModelParams p = Scalar(0.0);
  ModelParams g = Scalar(0.0);
  const std::vector<double> values = {2.0, -0.5, 1e-3, -40.0};
  auto tensors = g.Tensors();
  size_t n = 0;
  for (TensorView& t : tensors) {
    for (double& x : t.data) x = values[n++ % values.size()];
  }
  AdamState s = AdamState::ForParams(p);
  AdamStep(&p, g, &s, AdamConfig{});
  const auto pt = p.Tensors();
  const auto gt = std::as_const(g).Tensors();
  for (size_t i = 0; i < pt.size(); ++i) {
    for (size_t j = 0; j < pt[i].data.size(); ++j) {
      const double sign = gt[i].data[j] > 0 ? 1.0 : -1.0;
      EXPECT_NEAR(pt[i].data[j], -0.01 * sign, 1e-7) << pt[i].name;
    }
  }
}

TEST(AdamTest, TwoStepHandValues) {
  ModelParams p = Scalar(1.0);
  const ModelParams g = Scalar(2.0);
  AdamState s = AdamState::ForParams(p);
  AdamStep(&p, g, &s, AdamConfig{});
  // lr * g / (|g| + eps) with m_hat = g and sqrt(v_hat) = |g|.
  EXPECT_NEAR(p.dense_b[0], 1.0 - 0.01 * 2.0 / (2.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p.dense_b[0], 0.99000000005, 1e-15);
  AdamStep(&p, g, &s, AdamConfig{});
  EXPECT_NEAR(p.dense_b[0], 0.9800000001000001, 1e-15);
  EXPECT_EQ(s.step, 2);
}

TEST(AdamTest, NegatedGradientGivesOppositeDelta) {
  for (double g : {0.7, -3.0, 1e-6}) {
    ModelParams a = Scalar(0.5);
    ModelParams b = Scalar(0.5);
    AdamState sa = AdamState::ForParams(a);
    AdamState sb = AdamState::ForParams(b);
    for (int i = 0; i < 3; ++i) {
      AdamStep(&a, Scalar(g), &sa, AdamConfig{});
      AdamStep(&b, Scalar(-g), &sb, AdamConfig{});
    }
    EXPECT_NEAR(a.dense_b[0] - 0.5, -(b.dense_b[0] - 0.5), 1e-15);
    EXPECT_NE(a.dense_b[0], 0.5);
  }
}

TEST(AdamTest, NonFiniteGradientNamesTensorAndKeepsState) {
  ModelParams p = Scalar(0.25);
  ModelParams g = Scalar(1.0);
  g.dense_w(0, 0) = std::numeric_limits<double>::quiet_NaN();
  AdamState s = AdamState::ForParams(p);
  const ModelParams before = p;
  try {
    AdamStep(&p, g, &s, AdamConfig{});
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.tensor(), "dense.W");
  }
  EXPECT_EQ(s.step, 0);
  EXPECT_EQ(p.embedding, before.embedding);
  EXPECT_EQ(p.lstm().input_gate.input, before.lstm().input_gate.input);
  EXPECT_EQ(s.m.embedding, Matrix(2, 1));
}

TEST(AdamTest, ConfigValidation) {
  AdamConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.beta2 = 1.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.epsilon = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  TrainConfig t;
  t.iterations = 0;
  EXPECT_THROW(t.Validate(), std::invalid_argument);
}

TEST(MetricRecordTest, RoundTrip) {
  const MetricRecord r{50, "valid", "eval", 0.1 + 0.2, 2.0 / 3.0};
  EXPECT_EQ(r.Format(),
            "step=50 split=valid kind=eval loss=0.30000000000000004 "
            "accuracy=0.66666666666666663");
  EXPECT_EQ(ParseMetricRecord(r.Format()), r);
  EXPECT_THROW(ParseMetricRecord("step=1 split=train"), std::invalid_argument);
  EXPECT_THROW(ParseMetricRecord("step=1 bogus=2"), std::invalid_argument);
}

class TrainTest : public ::testing::Test {
 protected:
  void SetUp() override {
    train_ = ReadCorpus(testing::DataPath("overfit20/train")).sentences;
    valid_ = ReadCorpus(testing::DataPath("overfit20/valid")).sentences;
    model_.embed_dim = 8;
    model_.hidden_dim = 8;
    model_.seed = 3;
    cfg_.iterations = 20;
    cfg_.eval_every = 10;
    cfg_.seed = 4;
  }

  std::vector<TaggedSentence> train_;
  std::vector<TaggedSentence> valid_;
  ModelConfig model_;
  TrainConfig cfg_;
};

TEST_F(TrainTest, Deterministic) {
  const TrainResult a = Train(train_, valid_, model_, cfg_);
  const TrainResult b = Train(train_, valid_, model_, cfg_);
  EXPECT_EQ(SerializeCheckpoint(a.checkpoint),
            SerializeCheckpoint(b.checkpoint));
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.checkpoint.training.iterations_completed, 20);
  ASSERT_TRUE(a.checkpoint.adam.has_value());
  EXPECT_EQ(a.checkpoint.adam->step, 20);

  TrainConfig other = cfg_;
  other.seed = 5;
  EXPECT_NE(Train(train_, valid_, model_, other).log, a.log);
}

TEST_F(TrainTest, LogShape) {
  std::vector<MetricRecord> streamed;
  const TrainResult r =
      Train(train_, valid_, model_, cfg_,
            [&](const MetricRecord& m) { streamed.push_back(m); });
  EXPECT_EQ(streamed, r.log);
  int steps = 0;
  int evals = 0;
  for (const MetricRecord& m : r.log) {
    steps += m.kind == "step";
    evals += m.kind == "eval";
    EXPECT_TRUE(std::isfinite(m.loss));
  }
  EXPECT_EQ(steps, 20);
  EXPECT_EQ(evals, 2);
  ASSERT_GE(r.log.size(), 2u);
  EXPECT_EQ(r.log[r.log.size() - 2].kind, "final");
  EXPECT_EQ(r.log.back().kind, "best");
  EXPECT_EQ(r.checkpoint.config().vocab_size, r.checkpoint.vocab.size());
}

TEST_F(TrainTest, NoEvaluationsWhenIntervalExceedsIterations) {
  cfg_.eval_every = 21;
  const TrainResult r = Train(train_, valid_, model_, cfg_);
  EXPECT_EQ(r.log.size(), 20u);
  for (const MetricRecord& m : r.log) EXPECT_EQ(m.split, "train");
}

TEST_F(TrainTest, Errors) {
  EXPECT_THROW(Train({}, valid_, model_, cfg_), std::invalid_argument);
  model_.num_classes = 5;
  EXPECT_THROW(Train(train_, valid_, model_, cfg_), std::invalid_argument);
}

TEST_F(TrainTest, ScoreSplitMatchesEvaluate) {
  const TrainResult r = Train(train_, valid_, model_, cfg_);
  const SplitScore s = ScoreSplit(r.checkpoint.params, r.checkpoint.vocab,
                                  valid_);
  const EvalResult e = Evaluate(r.checkpoint, valid_);
  EXPECT_EQ(s.tokens, e.tokens);
  EXPECT_DOUBLE_EQ(s.accuracy, e.token_accuracy);
  EXPECT_NEAR(s.loss, e.loss, 1e-12);
  int64_t sum = 0;
  for (int64_t c : e.confusion) sum += c;
  EXPECT_EQ(sum, e.tokens);
  EXPECT_NE(e.Format().find("accuracy"), std::string::npos);
}

Checkpoint AllOutsideCheckpoint() {
  Checkpoint c;
  c.tag_fingerprint = TagOrderingFingerprint();
  c.vocab = Vocabulary::FromTokens({"a", "b"});
  ModelConfig cfg;
  cfg.vocab_size = c.vocab.size();
  cfg.embed_dim = 2;
  cfg.hidden_dim = 2;
  c.params = ModelParams::Zeros(cfg);
  c.params.dense_b[0] = 5.0;  // O always wins
  return c;
}

TEST(EvaluateTest, AllOutside) {
  const Checkpoint c = AllOutsideCheckpoint();
  TaggedSentence s;
  s.tokens = {"a", "b", "zzz"};
  s.tags = {Tag::Outside(), Tag::Outside(), Tag::Outside()};
  const EvalResult e = Evaluate(c, {s});
  EXPECT_EQ(e.token_accuracy, 1.0);
  EXPECT_EQ(e.tokens, 3);
  EXPECT_EQ(e.overall.gold, 0);
  EXPECT_EQ(e.overall.predicted, 0);
  EXPECT_EQ(e.overall.precision(), 0.0);
  EXPECT_EQ(PredictTags(c, {"a", "q"}), (std::vector<Tag>{Tag::Outside(),
                                                         Tag::Outside()}));
}

TEST(EvaluateTest, SpanCounting) {
  Checkpoint c = AllOutsideCheckpoint();
  c.params.dense_b[0] = 0.0;
  c.params.dense_b[TagToId(ParseTag("S-LOC"))] = 5.0;
  TaggedSentence s;
  s.tokens = {"a", "b"};
  s.tags = {ParseTag("S-LOC"), ParseTag("S-PER")};
  const EvalResult e = Evaluate(c, {s});
  const auto& loc = e.per_category[static_cast<int>(Category::LOC)];
  const auto& per = e.per_category[static_cast<int>(Category::PER)];
  EXPECT_EQ(loc.gold, 1);
  EXPECT_EQ(loc.predicted, 2);
  EXPECT_EQ(loc.correct, 1);
  EXPECT_EQ(per.recall(), 0.0);
  EXPECT_EQ(e.overall.correct, 1);
  EXPECT_DOUBLE_EQ(e.overall.precision(), 0.5);
}

TEST(EvaluateTest, RejectsMismatch) {
  Checkpoint c = AllOutsideCheckpoint();
  TaggedSentence s;
  s.tokens = {"a"};
  s.tags = {Tag::Outside()};
  EXPECT_THROW(Evaluate(c, {}), std::invalid_argument);
  c.tag_fingerprint = "O,B-PER";
  try {
    Evaluate(c, {s});
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), CheckpointError::Kind::kConfigMismatch);
  }
}

}  // namespace
}  // namespace arner
