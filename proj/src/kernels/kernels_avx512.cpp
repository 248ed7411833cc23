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

#if defined(PASS_HAVE_AVX512)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace pass::kernels::detail {
namespace {

constexpr std::size_t kNr = 16;  // two zmm registers of doubles
constexpr std::size_t kMr = 8;

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
  __m512d lo[Rows];
  __m512d hi[Rows];
  if (accumulate && width == kNr) {
    for (std::size_t r = 0; r < Rows; ++r) {
      lo[r] = _mm512_loadu_pd(c + r * ldc);
      hi[r] = _mm512_loadu_pd(c + r * ldc + 8);
    }
  } else {
    for (std::size_t r = 0; r < Rows; ++r) {
      lo[r] = _mm512_setzero_pd();
      hi[r] = _mm512_setzero_pd();
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    const __m512d b0 = _mm512_loadu_pd(panel + p * kNr);
    const __m512d b1 = _mm512_loadu_pd(panel + p * kNr + 8);
    for (std::size_t r = 0; r < Rows; ++r) {
      const __m512d av = _mm512_set1_pd(a[r * lda + p]);
      lo[r] = _mm512_fmadd_pd(av, b0, lo[r]);
      hi[r] = _mm512_fmadd_pd(av, b1, hi[r]);
    }
  }
  if (width == kNr) {
    for (std::size_t r = 0; r < Rows; ++r) {
      _mm512_storeu_pd(c + r * ldc, lo[r]);
      _mm512_storeu_pd(c + r * ldc + 8, hi[r]);
    }
    return;
  }
  alignas(64) double tmp[kNr];
  for (std::size_t r = 0; r < Rows; ++r) {
    _mm512_store_pd(tmp, lo[r]);
    _mm512_store_pd(tmp + 8, hi[r]);
    double* crow = c + r * ldc;
    for (std::size_t jj = 0; jj < width; ++jj)
      crow[jj] = accumulate ? crow[jj] + tmp[jj] : tmp[jj];
  }
}

template <std::size_t Rows>
void tail_rows(std::size_t k, const double* a, std::size_t lda,
               const double* panel, double* c, std::size_t ldc,
               std::size_t width, bool accumulate, std::size_t rest) {
  if constexpr (Rows > 0) {
    if (rest == Rows) {
      micro_kernel<Rows>(k, a, lda, panel, c, ldc, width, accumulate);
      return;
    }
    tail_rows<Rows - 1>(k, a, lda, panel, c, ldc, width, accumulate, rest);
  }
}

void gemm_avx512(std::size_t m, std::size_t n, std::size_t k, const double* a,
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
    tail_rows<kMr - 1>(k, a + i0 * lda, lda, panel.data(), c + i0 * ldc + j0,
                       ldc, width, accumulate, m - i0);
  }
}

void adam_avx512(double* param, const double* grad, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double corr1, double corr2) {
  const __m512d b1 = _mm512_set1_pd(beta1);
  const __m512d b2 = _mm512_set1_pd(beta2);
  const __m512d one_m_b1 = _mm512_set1_pd(1.0 - beta1);
  const __m512d one_m_b2 = _mm512_set1_pd(1.0 - beta2);
  const __m512d c1 = _mm512_set1_pd(corr1);
  const __m512d c2 = _mm512_set1_pd(corr2);
  const __m512d vlr = _mm512_set1_pd(lr);
  const __m512d veps = _mm512_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d g = _mm512_loadu_pd(grad + i);
    __m512d mi = _mm512_loadu_pd(m + i);
    __m512d vi = _mm512_loadu_pd(v + i);
    mi = _mm512_add_pd(_mm512_mul_pd(b1, mi), _mm512_mul_pd(one_m_b1, g));
    vi = _mm512_add_pd(_mm512_mul_pd(b2, vi),
                       _mm512_mul_pd(_mm512_mul_pd(one_m_b2, g), g));
    _mm512_storeu_pd(m + i, mi);
    _mm512_storeu_pd(v + i, vi);
    const __m512d mhat = _mm512_div_pd(mi, c1);
    const __m512d vhat = _mm512_div_pd(vi, c2);
    const __m512d step = _mm512_div_pd(_mm512_mul_pd(vlr, mhat),
                                       _mm512_add_pd(_mm512_sqrt_pd(vhat), veps));
    _mm512_storeu_pd(param + i, _mm512_sub_pd(_mm512_loadu_pd(param + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    param[i] -= lr * (m[i] / corr1) / (std::sqrt(v[i] / corr2) + eps);
  }
}

void polyak_avx512(double* target, const double* source, std::size_t n,
                   double tau) {
  const __m512d keep = _mm512_set1_pd(1.0 - tau);
  const __m512d vt = _mm512_set1_pd(tau);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d t = _mm512_loadu_pd(target + i);
    const __m512d s = _mm512_loadu_pd(source + i);
    _mm512_storeu_pd(target + i,
                     _mm512_add_pd(_mm512_mul_pd(keep, t), _mm512_mul_pd(vt, s)));
  }
  for (; i < n; ++i) target[i] = (1.0 - tau) * target[i] + tau * source[i];
}

void relu_avx512(const double* x, double* y, std::size_t n) {
  const __m512d zero = _mm512_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512d xv = _mm512_loadu_pd(x + i);
    const __mmask8 pos = _mm512_cmp_pd_mask(xv, zero, _CMP_GT_OQ);
    _mm512_storeu_pd(y + i, _mm512_maskz_mov_pd(pos, xv));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_avx512(const double* pre, double* g, std::size_t n) {
  const __m512d zero = _mm512_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __mmask8 pos =
        _mm512_cmp_pd_mask(_mm512_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm512_storeu_pd(g + i, _mm512_maskz_mov_pd(pos, _mm512_loadu_pd(g + i)));
  }
  for (; i < n; ++i)
    if (!(pre[i] > 0.0)) g[i] = 0.0;
}

constexpr KernelTable kAvx512Table{Isa::kAvx512,  gemm_avx512,
                                   adam_avx512,   polyak_avx512,
                                   relu_avx512,   relu_backward_avx512};

}  // namespace

const KernelTable* avx512_table() { return &kAvx512Table; }

}  // namespace pass::kernels::detail

#else

namespace pass::kernels::detail {
const KernelTable* avx512_table() { return nullptr; }
}  // namespace pass::kernels::detail

#endif
