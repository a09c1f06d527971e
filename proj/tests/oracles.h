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

#ifndef ARNER_TESTS_ORACLES_H_
#define ARNER_TESTS_ORACLES_H_

// Independent reference implementations used only by tests. Nothing here
// calls the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arner/bioes.h"
#include "arner/model.h"
#include "arner/random.h"
#include "arner/training.h"

namespace arner::testing {

// Checks each BIOES rule as a separate predicate over adjacent pairs and
// returns the smallest offending position.
inline std::optional<int> BruteForceFirstViolation(const std::vector<Tag>& tags) {
  const int n = static_cast<int>(tags.size());
  auto is = [](const Tag& t, Prefix p) { return t.prefix == p; };
  auto same = [](const Tag& a, const Tag& b) { return a.category == b.category; };
  std::vector<int> offending;
  for (int t = 0; t < n; ++t) {
    const Tag& cur = tags[t];
    const bool has_prev = t > 0;
    // B-X must be immediately followed by I-X or E-X.
    if (has_prev && is(tags[t - 1], Prefix::kBegin) &&
        !((is(cur, Prefix::kInside) || is(cur, Prefix::kEnd)) &&
          same(cur, tags[t - 1]))) {
      offending.push_back(t);
    }
    // I-X must be immediately preceded by B-X or I-X.
    if (is(cur, Prefix::kInside) &&
        !(has_prev &&
          (is(tags[t - 1], Prefix::kBegin) || is(tags[t - 1], Prefix::kInside)) &&
          same(cur, tags[t - 1]))) {
      offending.push_back(t);
    }
    // I-X must be immediately followed by I-X or E-X.
    if (has_prev && is(tags[t - 1], Prefix::kInside) &&
        !((is(cur, Prefix::kInside) || is(cur, Prefix::kEnd)) &&
          same(cur, tags[t - 1]))) {
      offending.push_back(t);
    }
    // E-X must be immediately preceded by B-X or I-X.
    if (is(cur, Prefix::kEnd) &&
        !(has_prev &&
          (is(tags[t - 1], Prefix::kBegin) || is(tags[t - 1], Prefix::kInside)) &&
          same(cur, tags[t - 1]))) {
      offending.push_back(t);
    }
  }
  // The sequence may not end in B-X or I-X.
  if (n > 0 && (is(tags[n - 1], Prefix::kBegin) || is(tags[n - 1], Prefix::kInside))) {
    offending.push_back(n - 1);
  }
  if (offending.empty()) return std::nullopt;
  return *std::min_element(offending.begin(), offending.end());
}

// Mean masked NLL, computed straight from the forward pass.
inline double SequenceLoss(const ModelParams& params, std::span<const int> ids,
                           std::span<const int> gold,
                           std::span<const uint8_t> mask) {
  const ForwardCache cache = ModelForward(params, ids, mask);
  double sum = 0.0;
  int n = 0;
  for (size_t t = 0; t < ids.size(); ++t) {
    if (!mask[t]) continue;
    sum -= cache.log_probs(t, gold[t]);
    ++n;
  }
  return sum / n;
}

struct GradientMismatch {
  std::string tensor;
  size_t index;
  double analytic;
  double numeric;
};

struct GradientCheckReport {
  size_t checked = 0;
  double max_relative_error = 0.0;
  std::vector<GradientMismatch> failures;
};

// Central finite differences over every parameter element. An element
// passes when |a - n| <= abs_floor or |a - n| / max(|a|, |n|) < rel_tol.
inline GradientCheckReport CheckGradients(ModelParams params,
                                          std::span<const int> ids,
                                          std::span<const int> gold,
                                          std::span<const uint8_t> mask,
                                          double step = 1e-5,
                                          double rel_tol = 1e-4,
                                          double abs_floor = 1e-8) {
  const ForwardCache cache = ModelForward(params, ids, mask);
  const LossResult loss = CrossEntropyLoss(cache.log_probs, gold, mask);
  const ModelParams analytic = ModelBackward(params, cache, loss.d_log_probs);

  GradientCheckReport report;
  std::vector<TensorView> views = params.Tensors();
  std::vector<ConstTensorView> grads = analytic.Tensors();
  for (size_t k = 0; k < views.size(); ++k) {
    for (size_t i = 0; i < views[k].data.size(); ++i) {
      double& w = views[k].data[i];
      const double saved = w;
      w = saved + step;
      const double plus = SequenceLoss(params, ids, gold, mask);
      w = saved - step;
      const double minus = SequenceLoss(params, ids, gold, mask);
      w = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double a = grads[k].data[i];
      const double diff = std::fabs(a - numeric);
      const double scale = std::max(std::fabs(a), std::fabs(numeric));
      const double rel = scale > 0.0 ? diff / scale : 0.0;
      ++report.checked;
      // Entries whose difference is under the absolute floor pass outright;
      // the reported maximum only covers entries large enough to matter.
      if (scale > 1e-6) {
        report.max_relative_error = std::max(report.max_relative_error, rel);
      }
      if (diff > abs_floor && !(rel < rel_tol)) {
        report.failures.push_back({views[k].name, i, a, numeric});
      }
    }
  }
  return report;
}

// Model with every tensor (biases and PAD row included) drawn from
// [-scale, scale].
inline ModelParams RandomModel(const ModelConfig& cfg, uint64_t seed,
                               double scale = 0.5) {
  ModelParams p = ModelParams::Zeros(cfg);
  Rng rng(seed);
  for (TensorView& t : p.Tensors()) {
    for (double& w : t.data) w = rng.Uniform(-scale, scale);
  }
  return p;
}

}  // namespace arner::testing

#endif  // ARNER_TESTS_ORACLES_H_
