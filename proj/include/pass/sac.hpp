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

// Soft actor-critic with a tanh-squashed Gaussian actor, twin critics with
// Polyak-averaged targets and learned entropy temperature.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pass/environment.hpp"
#include "pass/neural.hpp"
#include "pass/rng.hpp"

namespace pass {

struct SacConfig {
  std::vector<std::size_t> hidden{256, 256};
  double gamma = 0.99;
  double tau = 0.005;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double alpha_lr = 3e-4;
  double initial_alpha = 1.0;
  // Defaults to -(action dimension) when unset.
  std::optional<double> target_entropy;
  std::size_t buffer_capacity = 200000;
  std::size_t batch_size = 256;
  std::size_t warmup_steps = 1000;
  std::size_t updates_per_step = 1;
  int episodes = 400;
  int validation_interval = 20;  // episodes between best-checkpoint checks
  int validation_episodes = 5;
  double log_std_min = -20.0;
  double log_std_max = 2.0;

  void validate() const;

  friend bool operator==(const SacConfig&, const SacConfig&) = default;
};

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s_next;
  bool done = false;
};

struct TransitionBatch {
  Matrix s;
  Matrix a;
  std::vector<double> r;
  Matrix s_next;
  std::vector<double> done;
};

// Fixed-capacity ring buffer; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim);

  void push(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // Logical index: 0 is the oldest stored transition.
  Transition at(std::size_t i) const;

  // Uniform sampling with replacement. Throws std::logic_error when fewer
  // than batch transitions are stored.
  TransitionBatch sample(std::size_t batch, Rng& rng) const;

  // Batch from explicit physical slots (tests).
  TransitionBatch gather(std::span<const std::size_t> slots) const;

 private:
  std::size_t capacity_;
  std::size_t sdim_;
  std::size_t adim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<double> s_, a_, r_, s2_, d_;
};

struct ActionSample {
  std::vector<double> a;
  double log_prob = 0.0;  // zero for deterministic actions
};

// log density of a = tanh(u) for u ~ N(mu, exp(log_std)^2), per element
// summed, with the 1e-6 stabilizer inside the Jacobian term.
double squashed_gaussian_log_prob(std::span<const double> u, std::span<const double> mu,
                                  std::span<const double> log_std);

// r + gamma (1 - done) (min(q1, q2) - alpha log_prob)
double soft_td_value(double r, double done, double gamma, double q1, double q2, double alpha,
                     double log_prob);

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha_loss = 0.0;
  double alpha = 0.0;
};

class SacAgent {
 public:
  SacAgent(std::size_t state_dim, std::size_t action_dim, SacConfig config, std::uint64_t seed);

  std::size_t state_dim() const { return sdim_; }
  std::size_t action_dim() const { return adim_; }
  const SacConfig& config() const { return config_; }

  ActionSample sample_action(std::span<const double> s, Rng& rng, bool deterministic) const;

  // y = r + gamma (1 - done) (min(Q1', Q2')(s', a') - alpha log pi(a'|s')).
  std::vector<double> td_target(const TransitionBatch& batch, Rng& rng) const;

  // One critic, actor, temperature and target step on a sampled batch.
  UpdateStats update(const ReplayBuffer& buffer, Rng& rng);
  UpdateStats update_on(const TransitionBatch& batch, Rng& rng);

  double alpha() const;
  double log_alpha() const { return log_alpha_; }
  void set_log_alpha(double v) { log_alpha_ = v; }
  double target_entropy() const { return target_entropy_; }
  std::uint64_t update_count() const { return updates_; }
  std::uint64_t env_steps() const { return env_steps_; }
  void set_env_steps(std::uint64_t n) { env_steps_ = n; }

  Mlp& actor() { return actor_; }
  Mlp& q1() { return q1_; }
  Mlp& q2() { return q2_; }
  Mlp& q1_target() { return q1_target_; }
  Mlp& q2_target() { return q2_target_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& q1() const { return q1_; }
  const Mlp& q2() const { return q2_; }
  const Mlp& q1_target() const { return q1_target_; }
  const Mlp& q2_target() const { return q2_target_; }

  void set_kernels(const kernels::KernelTable& table);

  // Versioned binary checkpoint with hyperparameter metadata.
  void save(std::ostream& out) const;
  static SacAgent load(std::istream& in);
  void save_file(const std::string& path) const;
  static SacAgent load_file(const std::string& path);

 private:
  struct PolicyPass {
    Matrix mu;
    Matrix raw_log_std;
    Matrix log_std;
    Matrix eps;
    Matrix a;
    std::vector<double> log_prob;
    MlpCache cache;
  };

  PolicyPass policy(const Matrix& s, Rng& rng, bool with_cache) const;
  Matrix critic_input(const Matrix& s, const Matrix& a) const;

  std::size_t sdim_;
  std::size_t adim_;
  SacConfig config_;
  double target_entropy_;
  Mlp actor_, q1_, q2_, q1_target_, q2_target_;
  AdamState actor_opt_, q1_opt_, q2_opt_, alpha_opt_;
  double log_alpha_;
  std::uint64_t updates_ = 0;
  std::uint64_t env_steps_ = 0;
};

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;
  double mean_reward = 0.0;  // per-step mean
  double sum_se = 0.0;       // summed over the episode
  double critic_loss = 0.0;  // mean over the episode's updates
  double actor_loss = 0.0;
  double alpha = 0.0;
};

struct TrainResult {
  SacAgent agent;
  std::optional<SacAgent> best;
  double best_validation_se = 0.0;
  std::vector<EpisodeRecord> curve;
  ConstraintMonitor constraints;
};

// Called after each episode (progress reporting).
using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

TrainResult train(const EnvConfig& env_config, const SacConfig& sac_config, std::uint64_t seed,
                  const EpisodeCallback& on_episode = {});

// Seeds used for training and validation episodes.
std::uint64_t train_episode_seed(std::uint64_t seed, int episode);
std::uint64_t validation_episode_seed(std::uint64_t seed, int index);

void write_training_curve_csv(std::ostream& out, const std::vector<EpisodeRecord>& curve);

}  // namespace pass
