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

#ifndef ARNER_TRAINING_H_
#define ARNER_TRAINING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arner/checkpoint.h"
#include "arner/corpus.h"
#include "arner/model.h"
#include "arner/numerics.h"
#include "arner/optimizer.h"

namespace arner {

struct TrainConfig {
  AdamConfig adam;
  int iterations = 500;  // optimizer steps, one batch each
  int batch_size = 8;
  int max_len = 0;  // 0: longest training sentence
  int min_count = 1;
  uint64_t seed = 0;  // batch order
  int eval_every = 50;  // 0 disables validation

  void Validate() const;
};

struct LossResult {
  double loss = 0.0;
  Matrix d_log_probs;
};

// Mean negative log-likelihood of the gold tags over masked positions, with
// its gradient w.r.t. log_probs. Throws std::invalid_argument on an all-zero
// mask, length mismatch, or a gold id outside [0, K).
LossResult CrossEntropyLoss(const Matrix& log_probs, std::span<const int> gold,
                            std::span<const uint8_t> mask);

// Lowest index among maximal entries.
int ArgMax(std::span<const double> row);

// Fraction of masked positions whose argmax equals the gold id. Throws
// std::invalid_argument on an all-zero mask or length mismatch.
double TokenAccuracy(const Matrix& log_probs, std::span<const int> gold,
                     std::span<const uint8_t> mask);

struct MetricRecord {
  int64_t step = 0;
  std::string split;  // "train" or "valid"
  std::string kind;   // "step", "eval", "final" or "best"
  double loss = 0.0;
  double accuracy = 0.0;

  // One line of space-separated key=value pairs, e.g.
  // "step=50 split=valid kind=eval loss=0.5123 accuracy=0.9012".
  std::string Format() const;

  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

// Parses a line produced by MetricRecord::Format. Throws
// std::invalid_argument on malformed input.
MetricRecord ParseMetricRecord(std::string_view line);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<MetricRecord> log;
};

// Raised when a batch produces a non-finite loss or gradient. Carries the
// checkpoint from before the failing step.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, TrainResult last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const TrainResult& last_good() const { return last_good_; }

 private:
  TrainResult last_good_;
};

using MetricCallback = std::function<void(const MetricRecord&)>;

// Builds the vocabulary from `train`, initializes from model.seed and runs
// cfg.iterations Adam steps over batches drawn by a seeded shuffle that
// reshuffles at each epoch boundary. The batch loss is summed NLL over all
// real tokens in the batch divided by their count. model.vocab_size is
// replaced by the built vocabulary's size.
//
// Every step logs a train record. Every eval_every steps the valid split is
// scored; if any were, final and best valid records close the log.
TrainResult Train(const std::vector<TaggedSentence>& train,
                  const std::vector<TaggedSentence>& valid, ModelConfig model,
                  const TrainConfig& cfg, const MetricCallback& on_record = {});

// Mean per-token loss and token accuracy of the model over `sentences`.
struct SplitScore {
  double loss = 0.0;
  double accuracy = 0.0;
  int64_t tokens = 0;
};
SplitScore ScoreSplit(const ModelParams& params, const Vocabulary& vocab,
                      const std::vector<TaggedSentence>& sentences);

}  // namespace arner

#endif  // ARNER_TRAINING_H_
