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

#ifndef ARNER_KERNELS_H_
#define ARNER_KERNELS_H_

#include <cstddef>
#include <string_view>

// Dense double-precision inner loops behind the recurrent model. Each kernel
// has a scalar reference implementation and SIMD variants (AVX2+FMA on
// x86-64, NEON on AArch64); one table is selected at first use from CPU
// detection, or from the ARNER_SIMD environment variable
// ("scalar" | "avx2" | "neon").
//
// Rounding contract versus the scalar reference:
//   dot, gemv_acc      reassociated reduction with FMA; agree to a few ulp
//                      of sum(|a_i * b_i|)
//   gemv_t_acc, ger_acc, axpy, adam_update
//                      elementwise, same operation order, no FMA; bitwise
//                      identical
// Within a process the selected table never changes unless SetBackend is
// called, so results are bit-reproducible run to run on one machine.
namespace arner::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view BackendName(Backend b);

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double one_minus_beta1;
  double beta2;
  double one_minus_beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Backend backend;

  double (*dot)(const double* a, const double* b, size_t n);
  // y[r] += sum_c w[r * cols + c] * x[c]; w is row-major rows x cols.
  void (*gemv_acc)(const double* w, size_t rows, size_t cols, const double* x,
                   double* y);
  // y[c] += sum_r w[r * cols + c] * v[r], accumulated row by row.
  void (*gemv_t_acc)(const double* w, size_t rows, size_t cols,
                     const double* v, double* y);
  // w[r * cols + c] += a[r] * b[c]
  void (*ger_acc)(const double* a, size_t rows, const double* b, size_t cols,
                  double* w);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // In-place Adam moment and parameter update over n elements.
  void (*adam_update)(double* theta, double* m, double* v, const double* g,
                      size_t n, const AdamCoefficients& c);
};

// Currently selected table.
const KernelTable& Kernels();

// nullptr when the backend is not compiled in or the CPU lacks it.
const KernelTable* KernelsFor(Backend b);

bool BackendSupported(Backend b);
Backend DetectBestBackend();

// Throws std::invalid_argument if the backend is unsupported here.
void SetBackend(Backend b);

}  // namespace arner::simd

#endif  // ARNER_KERNELS_H_
