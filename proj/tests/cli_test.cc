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

#include "arner/cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include "arner/checkpoint.h"
#include "arner/training.h"
#include "test_util.h"

namespace arner::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Exec(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kFigure1 = testing::DataPath("figure1").string();

TEST(CliTest, HelpForEverySubcommand) {
  EXPECT_EQ(Exec({"--help"}).code, kOk);
  for (const char* sub :
       {"normalize", "validate", "stats", "train", "eval", "predict"}) {
    const Result r = Exec({sub, "--help"});
    EXPECT_EQ(r.code, kOk) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Exec({}).code, kUsage);
  EXPECT_EQ(Exec({"frobnicate"}).code, kUsage);
  EXPECT_EQ(Exec({"stats", "--data", kFigure1, "--bogus"}).code, kUsage);
  EXPECT_EQ(Exec({"validate"}).code, kUsage);
  EXPECT_EQ(Exec({"train", "--data", kFigure1, "--cell", "rnn", "--out", "x"})
                .code,
            kUsage);
}

TEST(CliTest, Normalize) {
  const Result r = Exec({"normalize"}, "كِتَابٌ الْعَيْونُ\n");
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "كتاب العيون\n");

  testing::TempDir dir("cli");
  const auto bad = dir.Write("bad.txt", "ok \xC3\x28");
  EXPECT_EQ(Exec({"normalize", "--input", bad.string()}).code, kFormatError);
  EXPECT_EQ(Exec({"normalize", "--input", (dir.path() / "missing").string()})
                .code,
            kIoError);
}

TEST(CliTest, ValidateAndStats) {
  const Result v = Exec({"validate", "--data", kFigure1});
  EXPECT_EQ(v.code, kOk) << v.err;
  EXPECT_NE(v.out.find("1 valid sentences"), std::string::npos) << v.out;

  testing::TempDir dir("cli");
  dir.Write("bad/a.csv", "file_name,sentence,word,tag\n1,1,a,I-PER\n");
  EXPECT_EQ(Exec({"validate", "--data", (dir.path() / "bad").string()}).code,
            kValidationFailed);
  EXPECT_EQ(Exec({"validate", "--data", (dir.path() / "none").string()}).code,
            kIoError);

  const Result s = Exec({"stats", "--data", kFigure1});
  EXPECT_EQ(s.code, kOk);
  EXPECT_NE(s.out.find("LOC"), std::string::npos);
  EXPECT_NE(s.out.find("10"), std::string::npos);
}

class CliPipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ckpt_ = (dir_.path() / "fig1.ckpt").string();
    const Result r = Exec({"train", "--data", kFigure1, "--cell", "lstm",
                           "--out", ckpt_, "--iterations", "60", "--hidden",
                           "16", "--embed", "16", "--batch", "1", "--seed",
                           "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
  }

  testing::TempDir dir_{"cli"};
  std::string ckpt_;
};

TEST_F(CliPipelineTest, TrainWritesCheckpointAndLog) {
  const Checkpoint c = LoadCheckpoint(ckpt_);
  EXPECT_EQ(c.training.iterations_completed, 60);
  EXPECT_EQ(c.config().hidden_dim, 16);
  const std::string log = testing::ReadFile(ckpt_ + ".metrics");
  std::istringstream lines(log);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(ParseMetricRecord(line).split, "train");
    ++n;
  }
  EXPECT_EQ(n, 60);
}

TEST_F(CliPipelineTest, PredictMemorizedPrefix) {
  const Result r = Exec({"predict", "--ckpt", ckpt_}, "قامت في مدينة اشور\n");
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "قامت\tO\nفي\tO\nمدينة\tB-LOC\nاشور\tE-LOC\n\n");
}

TEST_F(CliPipelineTest, EvalOnTrainingData) {
  const Result r = Exec({"eval", "--ckpt", ckpt_, "--data", kFigure1,
                         "--split", "train", "--cell", "lstm"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("accuracy"), std::string::npos);
}

TEST_F(CliPipelineTest, Mismatches) {
  EXPECT_EQ(Exec({"predict", "--ckpt", ckpt_, "--cell", "gru"}, "x\n").code,
            kConfigMismatch);
  const std::string overfit = testing::DataPath("overfit20").string();
  EXPECT_EQ(Exec({"eval", "--ckpt", ckpt_, "--data", overfit, "--split",
                  "test"})
                .code,
            kIoError);
  EXPECT_EQ(Exec({"predict", "--ckpt", (dir_.path() / "nope").string()}).code,
            kIoError);
  const auto junk = dir_.Write("junk.ckpt", "garbage");
  EXPECT_EQ(Exec({"predict", "--ckpt", junk.string()}).code, kFormatError);
}

}  // namespace
}  // namespace arner::cli
