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

#ifndef ARNER_OPTIMIZER_H_
#define ARNER_OPTIMIZER_H_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "arner/model.h"

namespace arner {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

// First and second moments shaped like the model, plus the step counter.
struct AdamState {
  ModelParams m;
  ModelParams v;
  int64_t step = 0;

  static AdamState ForParams(const ModelParams& params);
};

class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& tensor)
      : std::runtime_error("non-finite value in tensor '" + tensor + "'"),
        tensor_(tensor) {}
  const std::string& tensor() const { return tensor_; }

 private:
  std::string tensor_;
};

// One bias-corrected Adam update of every tensor. The gradients are checked
// before anything is written, so on NonFiniteError both params and state are
// unchanged. Throws std::invalid_argument on shape mismatch.
void AdamStep(ModelParams* params, const ModelParams& grads, AdamState* state,
              const AdamConfig& cfg);

}  // namespace arner

#endif  // ARNER_OPTIMIZER_H_
