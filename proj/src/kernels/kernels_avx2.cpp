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

#include "kernels_impl.hpp"

#if defined(PASS_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace pass::kernels::detail {
namespace {

constexpr std::size_t kNr = 8;  // two ymm registers of doubles
constexpr std::size_t kMr = 6;

// Pack columns [j0, j0 + kNr) of b into a contiguous k x kNr panel,
// zero-padding past n.
void pack_panel(const double* b, std::size_t ldb, std::size_t k,
                std::size_t j0, std::size_t n, double* out) {
  const std::size_t width = std::min(kNr, n - j0);
  for (std::size_t p = 0; p < k; ++p) {
    const double* src = b + p * ldb + j0;
    double* dst = out + p * kNr;
    std::size_t jj = 0;
    for (; jj < width; ++jj) dst[jj] = src[jj];
    for (; jj < kNr; ++jj) dst[jj] = 0.0;
  }
}

template <std::size_t Rows>
inline void micro_kernel(std::size_t k, const double* a, std::size_t lda,
                         const double* panel, double* c, std::size_t ldc,
                         std::size_t width, bool accumulate) {
  __m256d lo[Rows];
  __m256d hi[Rows];
  if (accumulate && width == kNr) {
    for (std::size_t r = 0; r < Rows; ++r) {
      lo[r] = _mm256_loadu_pd(c + r * ldc);
      hi[r] = _mm256_loadu_pd(c + r * ldc + 4);
    }
  } else {
    for (std::size_t r = 0; r < Rows; ++r) {
      lo[r] = _mm256_setzero_pd();
      hi[r] = _mm256_setzero_pd();
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d b0 = _mm256_loadu_pd(panel + p * kNr);
    const __m256d b1 = _mm256_loadu_pd(panel + p * kNr + 4);
    for (std::size_t r = 0; r < Rows; ++r) {
      const __m256d av = _mm256_broadcast_sd(a + r * lda + p);
      lo[r] = _mm256_fmadd_pd(av, b0, lo[r]);
      hi[r] = _mm256_fmadd_pd(av, b1, hi[r]);
    }
  }
  if (width == kNr) {
    for (std::size_t r = 0; r < Rows; ++r) {
      _mm256_storeu_pd(c + r * ldc, lo[r]);
      _mm256_storeu_pd(c + r * ldc + 4, hi[r]);
    }
    return;
  }
  alignas(32) double tmp[kNr];
  for (std::size_t r = 0; r < Rows; ++r) {
    _mm256_store_pd(tmp, lo[r]);
    _mm256_store_pd(tmp + 4, hi[r]);
    double* crow = c + r * ldc;
    for (std::size_t jj = 0; jj < width; ++jj)
      crow[jj] = accumulate ? crow[jj] + tmp[jj] : tmp[jj];
  }
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const double* a,
               std::size_t lda, const double* b, std::size_t ldb, double* c,
               std::size_t ldc, bool accumulate) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate)
      for (std::size_t i = 0; i < m; ++i) std::fill(c + i * ldc, c + i * ldc + n, 0.0);
    return;
  }
  thread_local std::vector<double> panel;
  panel.resize(k * kNr);
  for (std::size_t j0 = 0; j0 < n; j0 += kNr) {
    const std::size_t width = std::min(kNr, n - j0);
    pack_panel(b, ldb, k, j0, n, panel.data());
    std::size_t i0 = 0;
    for (; i0 + kMr <= m; i0 += kMr)
      micro_kernel<kMr>(k, a + i0 * lda, lda, panel.data(), c + i0 * ldc + j0,
                        ldc, width, accumulate);
    const std::size_t rest = m - i0;
    const double* at = a + i0 * lda;
    double* ct = c + i0 * ldc + j0;
    switch (rest) {
      case 5: micro_kernel<5>(k, at, lda, panel.data(), ct, ldc, width, accumulate); break;
      case 4: micro_kernel<4>(k, at, lda, panel.data(), ct, ldc, width, accumulate); break;
      case 3: micro_kernel<3>(k, at, lda, panel.data(), ct, ldc, width, accumulate); break;
      case 2: micro_kernel<2>(k, at, lda, panel.data(), ct, ldc, width, accumulate); break;
      case 1: micro_kernel<1>(k, at, lda, panel.data(), ct, ldc, width, accumulate); break;
      default: break;
    }
  }
}

void adam_avx2(double* param, const double* grad, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double corr1, double corr2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d one_m_b1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d one_m_b2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d c1 = _mm256_set1_pd(corr1);
  const __m256d c2 = _mm256_set1_pd(corr2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d vi = _mm256_loadu_pd(v + i);
    mi = _mm256_add_pd(_mm256_mul_pd(b1, mi), _mm256_mul_pd(one_m_b1, g));
    vi = _mm256_add_pd(_mm256_mul_pd(b2, vi),
                       _mm256_mul_pd(_mm256_mul_pd(one_m_b2, g), g));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d mhat = _mm256_div_pd(mi, c1);
    const __m256d vhat = _mm256_div_pd(vi, c2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat),
                                       _mm256_add_pd(_mm256_sqrt_pd(vhat), veps));
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    param[i] -= lr * (m[i] / corr1) / (std::sqrt(v[i] / corr2) + eps);
  }
}

void polyak_avx2(double* target, const double* source, std::size_t n,
                 double tau) {
  const __m256d keep = _mm256_set1_pd(1.0 - tau);
  const __m256d vt = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_loadu_pd(target + i);
    const __m256d s = _mm256_loadu_pd(source + i);
    _mm256_storeu_pd(target + i,
                     _mm256_add_pd(_mm256_mul_pd(keep, t), _mm256_mul_pd(vt, s)));
  }
  for (; i < n; ++i) target[i] = (1.0 - tau) * target[i] + tau * source[i];
}

void relu_avx2(const double* x, double* y, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_and_pd(xv, _mm256_cmp_pd(xv, zero, _CMP_GT_OQ)));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_avx2(const double* pre, double* g, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
  }
  for (; i < n; ++i)
    if (!(pre[i] > 0.0)) g[i] = 0.0;
}

constexpr KernelTable kAvx2Table{Isa::kAvx2, gemm_avx2,  adam_avx2,
                                 polyak_avx2, relu_avx2, relu_backward_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

}  // namespace pass::kernels::detail

#else

namespace pass::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pass::kernels::detail

#endif
