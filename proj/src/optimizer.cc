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

#include "arner/optimizer.h"

#include <cmath>

#include "arner/kernels.h"

namespace arner {

void AdamConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("beta1 and beta2 must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

AdamState AdamState::ForParams(const ModelParams& params) {
  AdamState s;
  s.m = ModelParams::Zeros(params.config);
  s.v = ModelParams::Zeros(params.config);
  return s;
}

void AdamStep(ModelParams* params, const ModelParams& grads, AdamState* state,
              const AdamConfig& cfg) {
  cfg.Validate();
  std::vector<TensorView> theta = params->Tensors();
  std::vector<ConstTensorView> g = grads.Tensors();
  std::vector<TensorView> m = state->m.Tensors();
  std::vector<TensorView> v = state->v.Tensors();
  if (g.size() != theta.size() || m.size() != theta.size() ||
      v.size() != theta.size()) {
    throw std::invalid_argument("adam: tensor count mismatch");
  }
  for (size_t i = 0; i < theta.size(); ++i) {
    const size_t n = theta[i].data.size();
    if (g[i].data.size() != n || m[i].data.size() != n ||
        v[i].data.size() != n || g[i].name != theta[i].name) {
      throw std::invalid_argument("adam: shape mismatch for tensor '" +
                                  theta[i].name + "'");
    }
    for (double x : g[i].data) {
      if (!std::isfinite(x)) throw NonFiniteError(g[i].name);
    }
  }

  const int64_t t = state->step + 1;
  simd::AdamCoefficients c;
  c.learning_rate = cfg.learning_rate;
  c.beta1 = cfg.beta1;
  c.one_minus_beta1 = 1.0 - cfg.beta1;
  c.beta2 = cfg.beta2;
  c.one_minus_beta2 = 1.0 - cfg.beta2;
  c.epsilon = cfg.epsilon;
  c.bias_correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  c.bias_correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

  const simd::KernelTable& k = simd::Kernels();
  for (size_t i = 0; i < theta.size(); ++i) {
    k.adam_update(theta[i].data.data(), m[i].data.data(), v[i].data.data(),
                  g[i].data.data(), theta[i].data.size(), c);
  }
  state->step = t;
}

}  // namespace arner
