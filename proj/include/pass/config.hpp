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

// Run configuration: defaults, flat key = value config files and dotted
// command-line overrides.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pass/environment.hpp"
#include "pass/mobility.hpp"
#include "pass/sac.hpp"

namespace pass {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int episodes_per_seed = 100;
  std::vector<std::string> methods{"fixed", "random", "sac"};
  unsigned jobs = 1;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct CaseStudyConfig {
  LShapeParams trajectory = LShapeParams::defaults();
  std::vector<int> steps{20, 40, 60, 80};

  friend bool operator==(const CaseStudyConfig&, const CaseStudyConfig&) = default;
};

struct RunConfig {
  EnvConfig env;
  SacConfig sac;
  EvalConfig eval;
  CaseStudyConfig case_study;
  std::optional<double> ref_gain_override;  // otherwise Friis at 1 m
  std::uint64_t seed = 1;
  std::string out_dir = "runs";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Defaults reproduce the reference system and training settings.
RunConfig default_config();

// Applies `key = value` overrides. Throws ConfigError naming the key on an
// unknown key or a malformed value.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Re-derives dependent quantities (wavelength, reference gain, shared
// geometry) and validates. Throws ConfigError.
void finalize_config(RunConfig& cfg);

// Parses "key = value" lines ('#' starts a comment).
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& origin);

// Defaults, then the file (if non-empty path), then overrides "key=value".
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Every key with its resolved value, one per line, in a fixed order.
// Loading the result reproduces the same RunConfig.
std::string config_to_text(const RunConfig& cfg);

std::vector<std::string> config_keys();

}  // namespace pass
