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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace pass::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_avx512() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx512f");
#else
  return false;
#endif
}

const KernelTable& select() {
  const KernelTable* best = &scalar_kernels();
  if (const auto* t = avx2_kernels()) best = t;
  if (const auto* t = avx512_kernels()) best = t;

  const char* forced = std::getenv("PASS_SIMD");
  if (forced == nullptr || *forced == '\0') return *best;
  const std::string want(forced);
  if (want == "scalar") return scalar_kernels();
  if (want == "avx2" && avx2_kernels()) return *avx2_kernels();
  if (want == "avx512" && avx512_kernels()) return *avx512_kernels();
  throw std::runtime_error("PASS_SIMD=" + want +
                           " is not available on this machine");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kAvx512: return "avx512";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
  return cpu_has_avx2() ? detail::avx2_table() : nullptr;
}

const KernelTable* avx512_kernels() {
  return cpu_has_avx512() ? detail::avx512_table() : nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = avx512_kernels()) out.push_back(t);
  return out;
}

}  // namespace pass::kernels
