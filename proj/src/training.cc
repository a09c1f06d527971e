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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "arner/bioes.h"
#include "arner/random.h"

namespace arner {

void TrainConfig::Validate() const {
  adam.Validate();
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (max_len < 0) throw std::invalid_argument("max_len must be >= 0");
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (eval_every < 0) throw std::invalid_argument("eval_every must be >= 0");
}

namespace {

int64_t CheckedMaskSum(const Matrix& log_probs, std::span<const int> gold,
                       std::span<const uint8_t> mask) {
  if (gold.size() != log_probs.rows() || mask.size() != log_probs.rows()) {
    throw std::invalid_argument("log_probs, gold and mask lengths differ");
  }
  int64_t n = 0;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    if (gold[t] < 0 || static_cast<size_t>(gold[t]) >= log_probs.cols()) {
      throw std::invalid_argument("gold id " + std::to_string(gold[t]) +
                                  " outside [0, " +
                                  std::to_string(log_probs.cols()) + ")");
    }
    ++n;
  }
  if (n == 0) throw std::invalid_argument("mask selects no positions");
  return n;
}

}  // namespace

LossResult CrossEntropyLoss(const Matrix& log_probs, std::span<const int> gold,
                            std::span<const uint8_t> mask) {
  const int64_t n = CheckedMaskSum(log_probs, gold, mask);
  LossResult r;
  r.d_log_probs = Matrix(log_probs.rows(), log_probs.cols());
  double sum = 0.0;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    sum -= log_probs(t, gold[t]);
    r.d_log_probs(t, gold[t]) = -1.0 / static_cast<double>(n);
  }
  r.loss = sum / static_cast<double>(n);
  return r;
}

int ArgMax(std::span<const double> row) {
  int best = 0;
  for (size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = static_cast<int>(j);
  }
  return best;
}

double TokenAccuracy(const Matrix& log_probs, std::span<const int> gold,
                     std::span<const uint8_t> mask) {
  const int64_t n = CheckedMaskSum(log_probs, gold, mask);
  int64_t correct = 0;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (mask[t] && ArgMax(log_probs.row(t)) == gold[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

std::string MetricRecord::Format() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "step=%lld split=%s kind=%s loss=%.17g accuracy=%.17g",
                static_cast<long long>(step), split.c_str(), kind.c_str(),
                loss, accuracy);
  return buf;
}

MetricRecord ParseMetricRecord(std::string_view line) {
  MetricRecord r;
  std::istringstream in{std::string(line)};
  std::string field;
  int seen = 0;
  while (in >> field) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("metric field without '=': " + field);
    }
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "step") {
        r.step = std::stoll(value);
      } else if (key == "split") {
        r.split = value;
      } else if (key == "kind") {
        r.kind = value;
      } else if (key == "loss") {
        r.loss = std::stod(value);
      } else if (key == "accuracy") {
        r.accuracy = std::stod(value);
      } else {
        throw std::invalid_argument("unknown metric key '" + key + "'");
      }
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("metric value out of range: " + field);
    }
    ++seen;
  }
  if (seen != 5) throw std::invalid_argument("metric line needs 5 fields");
  return r;
}

SplitScore ScoreSplit(const ModelParams& params, const Vocabulary& vocab,
                      const std::vector<TaggedSentence>& sentences) {
  SplitScore score;
  double nll = 0.0;
  int64_t correct = 0;
  std::vector<int> ids;
  for (const TaggedSentence& s : sentences) {
    ids.clear();
    for (const std::string& tok : s.tokens) ids.push_back(vocab.Lookup(tok));
    const ForwardCache cache = ModelForward(params, ids);
    for (size_t t = 0; t < ids.size(); ++t) {
      const int gold = TagToId(s.tags[t]);
      nll -= cache.log_probs(t, gold);
      if (ArgMax(cache.log_probs.row(t)) == gold) ++correct;
    }
    score.tokens += static_cast<int64_t>(ids.size());
  }
  if (score.tokens == 0) {
    score.loss = score.accuracy = std::numeric_limits<double>::quiet_NaN();
  } else {
    score.loss = nll / static_cast<double>(score.tokens);
    score.accuracy =
        static_cast<double>(correct) / static_cast<double>(score.tokens);
  }
  return score;
}

TrainResult Train(const std::vector<TaggedSentence>& train,
                  const std::vector<TaggedSentence>& valid, ModelConfig model,
                  const TrainConfig& cfg, const MetricCallback& on_record) {
  cfg.Validate();
  if (train.empty()) throw std::invalid_argument("training split is empty");
  if (model.num_classes != kNumTags) {
    throw std::invalid_argument("num_classes must equal the tag count (" +
                                std::to_string(kNumTags) + ")");
  }

  Vocabulary vocab = BuildVocab(train, cfg.min_count);
  model.vocab_size = vocab.size();

  int max_len = cfg.max_len;
  if (max_len == 0) {
    for (const TaggedSentence& s : train) {
      max_len = std::max(max_len, static_cast<int>(s.tokens.size()));
    }
  }
  std::vector<EncodedSentence> encoded;
  encoded.reserve(train.size());
  for (const TaggedSentence& s : train) {
    encoded.push_back(EncodeSentence(s, vocab, max_len));
  }

  ModelParams params = InitParams(model);
  AdamState adam = AdamState::ForParams(params);
  ModelParams grads = ModelParams::Zeros(model);

  std::vector<MetricRecord> log;
  auto emit = [&](MetricRecord r) {
    if (on_record) on_record(r);
    log.push_back(std::move(r));
  };
  auto snapshot = [&](int64_t completed) {
    TrainResult r;
    r.checkpoint.tag_fingerprint = TagOrderingFingerprint();
    r.checkpoint.vocab = vocab;
    r.checkpoint.params = params;
    r.checkpoint.adam = adam;
    r.checkpoint.training = {completed, cfg.seed, cfg.adam.learning_rate,
                             cfg.batch_size, max_len};
    r.log = log;
    return r;
  };

  Rng rng(cfg.seed);
  std::vector<size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), size_t{0});
  rng.Shuffle(order);
  size_t cursor = 0;

  const size_t classes = model.num_classes;
  std::vector<size_t> batch;
  bool have_eval = false;
  SplitScore last_eval;
  int64_t last_eval_step = 0;
  MetricRecord best;

  for (int64_t step = 1; step <= cfg.iterations; ++step) {
    batch.clear();
    for (int b = 0; b < cfg.batch_size; ++b) {
      if (cursor == order.size()) {
        rng.Shuffle(order);
        cursor = 0;
      }
      batch.push_back(order[cursor++]);
    }

    int64_t total = 0;
    for (size_t idx : batch) total += encoded[idx].real_length();
    const double scale = 1.0 / static_cast<double>(total);

    grads.SetZero();
    double nll = 0.0;
    int64_t correct = 0;
    for (size_t idx : batch) {
      const EncodedSentence& e = encoded[idx];
      const size_t n = e.real_length();
      const ForwardCache cache =
          ModelForward(params, std::span<const int>(e.token_ids).first(n));
      Matrix d_log_probs(n, classes);
      for (size_t t = 0; t < n; ++t) {
        const int gold = e.tag_ids[t];
        nll -= cache.log_probs(t, gold);
        d_log_probs(t, gold) = -scale;
        if (ArgMax(cache.log_probs.row(t)) == gold) ++correct;
      }
      AccumulateGradients(params, cache, d_log_probs, &grads);
    }
    const double loss = nll * scale;
    if (!std::isfinite(loss)) {
      throw TrainingAborted("non-finite loss at step " + std::to_string(step),
                            snapshot(step - 1));
    }
    try {
      AdamStep(&params, grads, &adam, cfg.adam);
    } catch (const NonFiniteError& e) {
      throw TrainingAborted("step " + std::to_string(step) + ": " + e.what(),
                            snapshot(step - 1));
    }
    emit({step, "train", "step", loss,
          static_cast<double>(correct) * scale});

    if (cfg.eval_every > 0 && step % cfg.eval_every == 0 && !valid.empty()) {
      last_eval = ScoreSplit(params, vocab, valid);
      last_eval_step = step;
      MetricRecord r{step, "valid", "eval", last_eval.loss, last_eval.accuracy};
      if (!have_eval || r.accuracy > best.accuracy) best = r;
      have_eval = true;
      emit(std::move(r));
    }
  }

  if (have_eval) {
    if (last_eval_step != cfg.iterations) {
      last_eval = ScoreSplit(params, vocab, valid);
      if (last_eval.accuracy > best.accuracy) {
        best = {cfg.iterations, "valid", "eval", last_eval.loss,
                last_eval.accuracy};
      }
    }
    emit({cfg.iterations, "valid", "final", last_eval.loss,
          last_eval.accuracy});
    best.kind = "best";
    emit(best);
  }
  return snapshot(cfg.iterations);
}

}  // namespace arner
