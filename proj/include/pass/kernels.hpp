// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The pass-sac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense double-precision kernels used by the MLP and optimizer code.
//
// Every kernel has a portable scalar reference implementation and, where
// the target supports it, SIMD variants (AVX2+FMA, AVX-512F). The active
// variant is chosen once at startup from CPUID; the PASS_SIMD environment
// variable ("scalar", "avx2", "avx512") forces a specific one. SIMD
// variants are checked against the scalar reference in the test suite.

#include <cstddef>
#include <string_view>
#include <vector>

namespace pass::kernels {

enum class Isa { kScalar, kAvx2, kAvx512 };

std::string_view isa_name(Isa isa);

// Table of kernel entry points for one instruction set.
struct KernelTable {
  Isa isa;

  // c[m x n] (+)= a[m x k] * b[k x n], all row-major with leading dims.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a,
               std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc, bool accumulate);

  // Bias-corrected Adam update over n parameters. corr1 = 1 - beta1^t,
  // corr2 = 1 - beta2^t.
  void (*adam)(double* param, const double* grad, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double corr1, double corr2);

  // target = (1 - tau) * target + tau * source
  void (*polyak)(double* target, const double* source, std::size_t n,
                 double tau);

  // y[i] = max(x[i], 0)
  void (*relu)(const double* x, double* y, std::size_t n);

  // g[i] = pre[i] > 0 ? g[i] : 0
  void (*relu_backward)(const double* pre, double* g, std::size_t n);
};

const KernelTable& scalar_kernels();

// Returns nullptr when the variant was not compiled in or the running CPU
// lacks the instructions.
const KernelTable* avx2_kernels();
const KernelTable* avx512_kernels();

// Variant selected for this process.
const KernelTable& active();

// All variants usable on this machine, scalar first.
std::vector<const KernelTable*> available();

}  // namespace pass::kernels
