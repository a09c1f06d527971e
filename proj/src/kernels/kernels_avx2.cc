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

#if (defined(__x86_64__) || defined(_M_X64)) && \
    (defined(__GNUC__) || defined(__clang__))
#define ARNER_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace arner::simd::internal {

#ifdef ARNER_HAVE_AVX2_KERNELS

namespace {

#define ARNER_AVX2 __attribute__((target("avx2,fma")))

ARNER_AVX2 inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

ARNER_AVX2 double Dot(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    i += 4;
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

ARNER_AVX2 void GemvAcc(const double* w, size_t rows, size_t cols,
                        const double* x, double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] += Dot(w + r * cols, x, cols);
}

// Multiply and add stay separate instructions so results match the scalar
// reference bit for bit.
ARNER_AVX2 void Axpy(double alpha, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

ARNER_AVX2 void GemvTAcc(const double* w, size_t rows, size_t cols,
                         const double* v, double* y) {
  for (size_t r = 0; r < rows; ++r) Axpy(v[r], w + r * cols, y, cols);
}

ARNER_AVX2 void GerAcc(const double* a, size_t rows, const double* b,
                       size_t cols, double* w) {
  for (size_t r = 0; r < rows; ++r) Axpy(a[r], b, w + r * cols, cols);
}

ARNER_AVX2 void AdamUpdate(double* theta, double* m, double* v,
                           const double* g, size_t n,
                           const AdamCoefficients& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1);
  const __m256d omb1 = _mm256_set1_pd(c.one_minus_beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2);
  const __m256d omb2 = _mm256_set1_pd(c.one_minus_beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.learning_rate);
  const __m256d eps = _mm256_set1_pd(c.epsilon);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(omb1, gi));
    const __m256d vi = _mm256_add_pd(
        _mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
        _mm256_mul_pd(omb2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, bc1);
    const __m256d v_hat = _mm256_div_pd(vi, bc2);
    const __m256d step =
        _mm256_div_pd(_mm256_mul_pd(lr, m_hat),
                      _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(theta + i, _mm256_sub_pd(_mm256_loadu_pd(theta + i), step));
  }
  if (i < n) {
    ScalarKernels().adam_update(theta + i, m + i, v + i, g + i, n - i, c);
  }
}

#undef ARNER_AVX2

constexpr KernelTable kAvx2 = {Backend::kAvx2, Dot,  GemvAcc,   GemvTAcc,
                               GerAcc,         Axpy, AdamUpdate};

}  // namespace

const KernelTable* Avx2Kernels() { return &kAvx2; }

#else

const KernelTable* Avx2Kernels() { return nullptr; }

#endif  // ARNER_HAVE_AVX2_KERNELS

}  // namespace arner::simd::internal
