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

#include <cmath>

#include "kernels_internal.h"

namespace arner::simd::internal {

namespace {

double Dot(const double* a, const double* b, size_t n) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void GemvAcc(const double* w, size_t rows, size_t cols, const double* x,
             double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] += Dot(w + r * cols, x, cols);
}

void Axpy(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void GemvTAcc(const double* w, size_t rows, size_t cols, const double* v,
              double* y) {
  for (size_t r = 0; r < rows; ++r) Axpy(v[r], w + r * cols, y, cols);
}

void GerAcc(const double* a, size_t rows, const double* b, size_t cols,
            double* w) {
  for (size_t r = 0; r < rows; ++r) Axpy(a[r], b, w + r * cols, cols);
}

void AdamUpdate(double* theta, double* m, double* v, const double* g, size_t n,
                const AdamCoefficients& c) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + c.one_minus_beta1 * g[i];
    v[i] = c.beta2 * v[i] + c.one_minus_beta2 * (g[i] * g[i]);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    theta[i] -= (c.learning_rate * m_hat) / (std::sqrt(v_hat) + c.epsilon);
  }
}

constexpr KernelTable kScalar = {Backend::kScalar, Dot,    GemvAcc, GemvTAcc,
                                 GerAcc,           Axpy,   AdamUpdate};

}  // namespace

const KernelTable& ScalarKernels() { return kScalar; }

}  // namespace arner::simd::internal
