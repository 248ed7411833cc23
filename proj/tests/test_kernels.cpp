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

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pass/kernels.hpp"
#include "pass/rng.hpp"

using namespace pass;
using namespace pass::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

// Triple loop with a fixed k-order, independent of the kernel table.
void naive_gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                const double* b, std::size_t ldb, double* c, std::size_t ldc, bool acc) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = acc ? c[i * ldc + j] : 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * lda + p] * b[p * ldb + j];
      c[i * ldc + j] = s;
    }
}

double max_rel_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(x[i] - y[i]) / std::max(1.0, std::abs(y[i])));
  return worst;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto all = available();
  REQUIRE(!all.empty());
  CHECK(all.front()->isa == Isa::kScalar);
  CHECK(isa_name(Isa::kAvx2) == "avx2");
  CHECK(isa_name(active().isa).size() > 0);
}

TEST_CASE("scalar gemm matches the naive triple loop") {
  Rng rng(1);
  for (std::size_t m : {1u, 3u, 7u, 33u})
    for (std::size_t n : {1u, 5u, 16u, 41u})
      for (std::size_t k : {1u, 2u, 19u}) {
        const auto a = random_vec(m * k, rng), b = random_vec(k * n, rng);
        for (bool acc : {false, true}) {
          auto c0 = random_vec(m * n, rng);
          auto c1 = c0;
          scalar_kernels().gemm(m, n, k, a.data(), k, b.data(), n, c0.data(), n, acc);
          naive_gemm(m, n, k, a.data(), k, b.data(), n, c1.data(), n, acc);
          CHECK(max_rel_diff(c0, c1) < 1e-13);
        }
      }
}

TEST_CASE("every SIMD variant agrees with the scalar reference") {
  Rng rng(2);
  const KernelTable& ref = scalar_kernels();
  for (const KernelTable* t : available()) {
    CAPTURE(isa_name(t->isa));
    SUBCASE("gemm, edge shapes and leading dimensions") {
      for (std::size_t m : {1u, 5u, 6u, 8u, 13u, 64u})
        for (std::size_t n : {1u, 7u, 8u, 16u, 17u, 40u})
          for (std::size_t k : {1u, 3u, 44u, 256u}) {
            const std::size_t lda = k + 3, ldb = n + 1, ldc = n + 2;
            const auto a = random_vec(m * lda, rng), b = random_vec(k * ldb, rng);
            for (bool acc : {false, true}) {
              auto c0 = random_vec(m * ldc, rng);
              auto c1 = c0;
              ref.gemm(m, n, k, a.data(), lda, b.data(), ldb, c0.data(), ldc, acc);
              t->gemm(m, n, k, a.data(), lda, b.data(), ldb, c1.data(), ldc, acc);
              CHECK(max_rel_diff(c1, c0) < 1e-12);
              // Padding columns past n stay untouched.
              for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = n; j < ldc; ++j) CHECK(c1[i * ldc + j] == c0[i * ldc + j]);
            }
          }
    }
    SUBCASE("adam, polyak, relu on ragged lengths") {
      for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u}) {
        const auto g = random_vec(n, rng);
        auto p0 = random_vec(n, rng), m0 = random_vec(n, rng), v0 = random_vec(n, rng, 0.0, 1.0);
        auto p1 = p0, m1 = m0, v1 = v0;
        ref.adam(p0.data(), g.data(), m0.data(), v0.data(), n, 3e-4, 0.9, 0.999, 1e-8, 0.19, 0.002);
        t->adam(p1.data(), g.data(), m1.data(), v1.data(), n, 3e-4, 0.9, 0.999, 1e-8, 0.19, 0.002);
        CHECK(max_rel_diff(p1, p0) < 1e-14);
        CHECK(max_rel_diff(m1, m0) < 1e-14);
        CHECK(max_rel_diff(v1, v0) < 1e-14);

        const auto src = random_vec(n, rng);
        auto t0 = random_vec(n, rng);
        auto t1 = t0;
        ref.polyak(t0.data(), src.data(), n, 0.005);
        t->polyak(t1.data(), src.data(), n, 0.005);
        CHECK(max_rel_diff(t1, t0) < 1e-15);

        std::vector<double> y0(n), y1(n);
        ref.relu(g.data(), y0.data(), n);
        t->relu(g.data(), y1.data(), n);
        CHECK(y0 == y1);
        auto gb0 = src, gb1 = src;
        ref.relu_backward(g.data(), gb0.data(), n);
        t->relu_backward(g.data(), gb1.data(), n);
        CHECK(gb0 == gb1);
      }
    }
  }
}

TEST_CASE("relu kernels follow their definitions") {
  const double x[4] = {-1.0, 0.0, 2.0, -0.0};
  double y[4];
  scalar_kernels().relu(x, y, 4);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 0.0);
  CHECK(y[2] == 2.0);
  double g[4] = {5.0, 5.0, 5.0, 5.0};
  scalar_kernels().relu_backward(x, g, 4);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);  // derivative taken as 0 at the kink
  CHECK(g[2] == 5.0);
}
