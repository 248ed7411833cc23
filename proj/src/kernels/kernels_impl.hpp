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

#include "pass/kernels.hpp"

namespace pass::kernels::detail {

// Compiled into separate translation units with ISA-specific flags. The
// accessors return nullptr when the unit was built without support.
const KernelTable* avx2_table();
const KernelTable* avx512_table();

}  // namespace pass::kernels::detail
