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

#include "kernels_internal.h"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define ARNER_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

namespace arner::simd::internal {

#ifdef ARNER_HAVE_NEON_KERNELS

namespace {

double Dot(const double* a, const double* b, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void GemvAcc(const double* w, size_t rows, size_t cols, const double* x,
             double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] += Dot(w + r * cols, x, cols);
}

void Axpy(double alpha, const double* x, double* y, size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
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
  const float64x2_t b1 = vdupq_n_f64(c.beta1);
  const float64x2_t omb1 = vdupq_n_f64(c.one_minus_beta1);
  const float64x2_t b2 = vdupq_n_f64(c.beta2);
  const float64x2_t omb2 = vdupq_n_f64(c.one_minus_beta2);
  const float64x2_t bc1 = vdupq_n_f64(c.bias_correction1);
  const float64x2_t bc2 = vdupq_n_f64(c.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(c.learning_rate);
  const float64x2_t eps = vdupq_n_f64(c.epsilon);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vld1q_f64(g + i);
    const float64x2_t mi =
        vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, gi));
    const float64x2_t vi = vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)),
                                     vmulq_f64(omb2, vmulq_f64(gi, gi)));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t step =
        vdivq_f64(vmulq_f64(lr, vdivq_f64(mi, bc1)),
                  vaddq_f64(vsqrtq_f64(vdivq_f64(vi, bc2)), eps));
    vst1q_f64(theta + i, vsubq_f64(vld1q_f64(theta + i), step));
  }
  if (i < n) {
    ScalarKernels().adam_update(theta + i, m + i, v + i, g + i, n - i, c);
  }
}

constexpr KernelTable kNeon = {Backend::kNeon, Dot,  GemvAcc,   GemvTAcc,
                               GerAcc,         Axpy, AdamUpdate};

}  // namespace

const KernelTable* NeonKernels() { return &kNeon; }

#else

const KernelTable* NeonKernels() { return nullptr; }

#endif  // ARNER_HAVE_NEON_KERNELS

}  // namespace arner::simd::internal
