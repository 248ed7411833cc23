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

// Baseline policies, multi-seed evaluation with common random numbers,
// summary statistics and the L-shape case study.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pass/environment.hpp"
#include "pass/sac.hpp"

namespace pass {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<double> act(const Observation& obs, Rng& rng) = 0;
};

// Uniform in [-1, 1] per antenna.
std::vector<double> policy_random(std::size_t num_antennas, Rng& rng);
// All zeros: antennas stay where they are (the waveguide centers).
std::vector<double> policy_fixed(std::size_t num_antennas);

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::size_t num_antennas) : n_(num_antennas) {}
  std::vector<double> act(const Observation&, Rng& rng) override { return policy_random(n_, rng); }

 private:
  std::size_t n_;
};

class FixedPolicy final : public Policy {
 public:
  explicit FixedPolicy(std::size_t num_antennas) : n_(num_antennas) {}
  std::vector<double> act(const Observation&, Rng&) override { return policy_fixed(n_); }

 private:
  std::size_t n_;
};

// Deterministic tanh(mu) actions of a trained agent.
class SacPolicy final : public Policy {
 public:
  explicit SacPolicy(std::shared_ptr<const SacAgent> agent);
  std::vector<double> act(const Observation& obs, Rng& rng) override;

 private:
  std::shared_ptr<const SacAgent> agent_;
};

// Builds the policy used for the seed at the given position in the seed list.
using PolicyFactory = std::function<std::unique_ptr<Policy>(std::size_t seed_index)>;

struct EvalMethod {
  std::string name;
  PolicyFactory make;
};

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

struct MethodResult {
  std::string name;
  std::vector<std::vector<double>> per_seed;  // episode sum SE, [seed][episode]
  double mean = 0.0;             // over all episodes
  double std = 0.0;              // sample std of the per-seed means
  double improvement_pct = 0.0;  // vs the baseline method
  std::vector<CdfPoint> cdf;     // over all episodes
};

struct EvalReport {
  std::vector<std::uint64_t> seeds;
  int episodes_per_seed = 0;
  std::string baseline;
  std::vector<MethodResult> methods;
  ConstraintMonitor constraints;

  const MethodResult& method(const std::string& name) const;
};

// Fraction i/n at the i-th order statistic. Throws on empty input.
std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

// Empirical CDF value at x: fraction of samples <= x.
double cdf_at(std::span<const CdfPoint> cdf, double x);

double improvement_pct(double mean, double baseline_mean);

std::uint64_t eval_episode_seed(std::uint64_t seed, int episode);

// Runs one episode and returns its sum SE (sum over steps of per-step sum
// SE). Optionally collects every step result.
double run_episode(Environment& env, Policy& policy, std::uint64_t episode_seed, Rng& policy_rng,
                   std::vector<StepResult>* steps = nullptr);

// Every method sees the same channel and mobility draws for a given
// (seed, episode). jobs > 1 runs (method, seed) pairs concurrently; the
// report does not depend on jobs.
EvalReport evaluate(const std::vector<EvalMethod>& methods, const EnvConfig& env_config,
                    const std::vector<std::uint64_t>& seeds, int episodes_per_seed,
                    const std::string& baseline = "fixed", unsigned jobs = 1);

struct CaseSnapshot {
  int step = 0;
  std::vector<Vec2> users;
  std::vector<Vec2> antennas;       // (x along guide, waveguide y)
  std::vector<std::uint8_t> los;     // K x N, user-major
  std::vector<double> power_alloc;   // N x K, |W_{n,k}|^2, antenna-major
  double total_power = 0.0;
};

// One L-shape episode; snapshots taken after the listed steps (1-based).
// The episode's constraint counters are merged into monitor when given.
std::vector<CaseSnapshot> case_study(Policy& policy, const EnvConfig& env_config,
                                     const LShapeParams& trajectory,
                                     const std::vector<int>& snapshot_steps, std::uint64_t seed,
                                     ConstraintMonitor* monitor = nullptr);

// eval_episodes.csv, eval_summary.csv, cdf.csv
void write_eval_csvs(const EvalReport& report, const std::string& dir);
// case_study.csv, power_alloc.csv
void write_case_study_csvs(const std::vector<CaseSnapshot>& snaps, std::size_t num_users,
                           std::size_t num_antennas, const std::string& dir);

}  // namespace pass
