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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.h"

namespace arner::simd {

namespace {

bool CpuHasAvx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && \
    (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* InitialTable() {
  if (const char* env = std::getenv("ARNER_SIMD")) {
    const std::string want(env);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
      if (want == BackendName(b) && BackendSupported(b)) return KernelsFor(b);
    }
  }
  return KernelsFor(DetectBestBackend());
}

std::atomic<const KernelTable*>& Active() {
  static std::atomic<const KernelTable*> active{InitialTable()};
  return active;
}

}  // namespace

std::string_view BackendName(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* KernelsFor(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return &internal::ScalarKernels();
    case Backend::kAvx2:
      return CpuHasAvx2() ? internal::Avx2Kernels() : nullptr;
    case Backend::kNeon:
      return internal::NeonKernels();
  }
  return nullptr;
}

bool BackendSupported(Backend b) { return KernelsFor(b) != nullptr; }

Backend DetectBestBackend() {
  if (BackendSupported(Backend::kAvx2)) return Backend::kAvx2;
  if (BackendSupported(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

const KernelTable& Kernels() { return *Active().load(std::memory_order_acquire); }

void SetBackend(Backend b) {
  const KernelTable* table = KernelsFor(b);
  if (table == nullptr) {
    throw std::invalid_argument("SIMD backend '" + std::string(BackendName(b)) +
                                "' is not available on this machine");
  }
  Active().store(table, std::memory_order_release);
}

}  // namespace arner::simd
