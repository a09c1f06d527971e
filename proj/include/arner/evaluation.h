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

#ifndef ARNER_EVALUATION_H_
#define ARNER_EVALUATION_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "arner/bioes.h"
#include "arner/checkpoint.h"
#include "arner/corpus.h"
#include "arner/text_norm.h"

namespace arner {

struct SpanCounts {
  int64_t gold = 0;
  int64_t predicted = 0;
  int64_t correct = 0;

  // 0 when the denominator is 0.
  double precision() const;
  double recall() const;
};

struct EvalResult {
  int64_t tokens = 0;
  int64_t correct_tokens = 0;
  double token_accuracy = 0.0;
  double loss = 0.0;
  std::array<SpanCounts, kNumCategories> per_category{};
  SpanCounts overall;
  // confusion[gold * kNumTags + predicted]
  std::vector<int64_t> confusion;

  // Token accuracy, a per-category span precision/recall table and the most
  // frequent off-diagonal confusions.
  std::string Format(int top_confusions = 10) const;
};

// Greedy per-token argmax decoding. Predicted sequences that break BIOES
// grammar are decoded with DecodeSpansLenient; so are invalid gold
// sequences kept by a lenient load. Exact-match spans count as correct.
// Throws CheckpointError(kConfigMismatch) on label-space mismatch and
// std::invalid_argument on an empty split.
EvalResult Evaluate(const Checkpoint& checkpoint,
                    const std::vector<TaggedSentence>& split);

// Normalizes each raw token, maps it through the vocabulary and returns the
// argmax tag per position.
std::vector<Tag> PredictTags(const Checkpoint& checkpoint,
                             const std::vector<std::string>& raw_tokens,
                             const NormalizationConfig& norm = {});

}  // namespace arner

#endif  // ARNER_EVALUATION_H_
