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

#ifndef ARNER_SRC_KERNELS_KERNELS_INTERNAL_H_
#define ARNER_SRC_KERNELS_KERNELS_INTERNAL_H_

#include "arner/kernels.h"

namespace arner::simd::internal {

const KernelTable& ScalarKernels();
// nullptr when not built for this architecture.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

}  // namespace arner::simd::internal

#endif  // ARNER_SRC_KERNELS_KERNELS_INTERNAL_H_
