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

#include "arner/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "arner/model.h"
#include "arner/training.h"

namespace arner {

double SpanCounts::precision() const {
  return predicted == 0 ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(predicted);
}

double SpanCounts::recall() const {
  return gold == 0 ? 0.0
                   : static_cast<double>(correct) / static_cast<double>(gold);
}

namespace {

std::vector<Tag> ArgMaxTags(const ForwardCache& cache) {
  std::vector<Tag> tags;
  for (size_t t = 0; t < cache.log_probs.rows(); ++t) {
    tags.push_back(IdToTag(ArgMax(cache.log_probs.row(t))));
  }
  return tags;
}

}  // namespace

EvalResult Evaluate(const Checkpoint& checkpoint,
                    const std::vector<TaggedSentence>& split) {
  CheckCompatible(checkpoint);
  if (split.empty()) throw std::invalid_argument("evaluation split is empty");

  EvalResult r;
  r.confusion.assign(kNumTags * kNumTags, 0);
  double nll = 0.0;
  std::vector<int> ids;
  for (const TaggedSentence& s : split) {
    ids.clear();
    for (const std::string& tok : s.tokens) {
      ids.push_back(checkpoint.vocab.Lookup(tok));
    }
    const ForwardCache cache = ModelForward(checkpoint.params, ids);
    const std::vector<Tag> predicted = ArgMaxTags(cache);
    for (size_t t = 0; t < ids.size(); ++t) {
      const TagId gold = TagToId(s.tags[t]);
      const TagId pred = TagToId(predicted[t]);
      nll -= cache.log_probs(t, gold);
      ++r.confusion[gold * kNumTags + pred];
      if (gold == pred) ++r.correct_tokens;
      ++r.tokens;
    }

    const std::vector<EntitySpan> gold_spans = DecodeSpansLenient(s.tags);
    const std::vector<EntitySpan> pred_spans = DecodeSpansLenient(predicted);
    auto key = [](const EntitySpan& e) {
      return std::make_tuple(e.start, e.end, static_cast<int>(e.category));
    };
    std::set<std::tuple<int, int, int>> gold_set;
    for (const EntitySpan& e : gold_spans) {
      gold_set.insert(key(e));
      ++r.per_category[static_cast<int>(e.category)].gold;
    }
    for (const EntitySpan& e : pred_spans) {
      SpanCounts& c = r.per_category[static_cast<int>(e.category)];
      ++c.predicted;
      if (gold_set.count(key(e))) ++c.correct;
    }
  }
  for (const SpanCounts& c : r.per_category) {
    r.overall.gold += c.gold;
    r.overall.predicted += c.predicted;
    r.overall.correct += c.correct;
  }
  r.token_accuracy =
      static_cast<double>(r.correct_tokens) / static_cast<double>(r.tokens);
  r.loss = nll / static_cast<double>(r.tokens);
  return r;
}

std::string EvalResult::Format(int top_confusions) const {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "token accuracy: %.4f (%lld / %lld)\nmean loss: %.6f\n\n",
                token_accuracy, static_cast<long long>(correct_tokens),
                static_cast<long long>(tokens), loss);
  os << buf;
  std::snprintf(buf, sizeof(buf), "%-8s %8s %8s %8s %10s %10s\n", "category",
                "gold", "pred", "correct", "precision", "recall");
  os << buf;
  auto row = [&](std::string_view name, const SpanCounts& c) {
    std::snprintf(buf, sizeof(buf), "%-8.*s %8lld %8lld %8lld %10.4f %10.4f\n",
                  static_cast<int>(name.size()), name.data(),
                  static_cast<long long>(c.gold),
                  static_cast<long long>(c.predicted),
                  static_cast<long long>(c.correct), c.precision(), c.recall());
    os << buf;
  };
  for (int c = 0; c < kNumCategories; ++c) {
    row(CategoryName(static_cast<Category>(c)), per_category[c]);
  }
  row("overall", overall);

  std::vector<std::tuple<int64_t, int, int>> off;
  for (int g = 0; g < kNumTags; ++g) {
    for (int p = 0; p < kNumTags; ++p) {
      const int64_t n = confusion[g * kNumTags + p];
      if (g != p && n > 0) off.emplace_back(-n, g, p);
    }
  }
  std::sort(off.begin(), off.end());
  if (!off.empty()) {
    os << "\ntop confusions (gold -> predicted):\n";
    for (size_t i = 0; i < off.size() && static_cast<int>(i) < top_confusions;
         ++i) {
      const auto& [neg, g, p] = off[i];
      os << "  " << TagToString(IdToTag(g)) << " -> "
         << TagToString(IdToTag(p)) << ": " << -neg << "\n";
    }
  }
  return os.str();
}

std::vector<Tag> PredictTags(const Checkpoint& checkpoint,
                             const std::vector<std::string>& raw_tokens,
                             const NormalizationConfig& norm) {
  CheckCompatible(checkpoint);
  if (raw_tokens.empty()) return {};
  std::vector<int> ids;
  for (const std::string& tok : raw_tokens) {
    ids.push_back(checkpoint.vocab.Lookup(NormalizeUtf8(tok, norm)));
  }
  return ArgMaxTags(ModelForward(checkpoint.params, ids));
}

}  // namespace arner
