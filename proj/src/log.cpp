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

#include "pass/log.hpp"

#include <atomic>
#include <iostream>

namespace pass {

namespace {
constexpr int kMaxWarnings = 16;
std::atomic<int> g_warnings{0};
}  // namespace

void log_warning(std::string_view msg) {
  const int n = g_warnings.fetch_add(1);
  if (n < kMaxWarnings) {
    std::cerr << "warning: " << msg << '\n';
  } else if (n == kMaxWarnings) {
    std::cerr << "warning: further warnings suppressed\n";
  }
}

}  // namespace pass
