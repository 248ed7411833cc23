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

// passctl subcommands: train, eval and case-study.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pass {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2 };

// args excludes the program name. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// <out>/<command>-<YYYYmmdd-HHMMSS>-seed<seed>, with a -N suffix when the
// directory already exists. Creates the directory.
std::string make_run_dir(const std::string& out_root, const std::string& command,
                         std::uint64_t seed);

}  // namespace pass
