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

// Markov decision process over the pinching-antenna downlink: the agent
// slides antennas, users move, the channel evolves and a zero-forcing
// precoder serves all users.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pass/beamforming.hpp"
#include "pass/channel.hpp"
#include "pass/mobility.hpp"

namespace pass {

struct EnvConfig {
  std::size_t num_users = 3;
  std::vector<double> waveguide_y{20.0, 40.0, 60.0, 80.0};
  double area_side = 100.0;  // D
  double max_slide = 3.0;    // per-slot displacement limit, m
  double move_weight = 0.03; // reward penalty per meter moved
  double p_max = 1.0;
  double effective_index = 1.4;  // guided wavelength = wavelength / index
  int episode_length = 80;
  double gain_db_min = -140.0;
  double gain_db_max = -40.0;
  MobilityParams mobility;
  ChannelParams channel = ChannelParams::defaults();

  std::size_t num_antennas() const { return waveguide_y.size(); }
  std::size_t observation_size() const {
    const std::size_t k = num_users;
    const std::size_t n = num_antennas();
    return 4 * k + n + 2 * k * n;
  }
  double guided_wavelength() const { return channel.wavelength / effective_index; }

  // Throws std::invalid_argument (e.g. "N must be >= K").
  void validate() const;

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

struct EnvState {
  std::vector<UserState> users;
  AntennaConfig antennas;
  std::vector<LinkState> links;  // K x N, user-major
  int t = 0;
  std::vector<double> last_displacements;

  const LinkState& link(std::size_t k, std::size_t n) const {
    return links[k * antennas.size() + n];
  }
};

struct Observation {
  std::vector<double> vec;
};

// Per-slot log record.
struct StepRecord {
  int t = 0;
  std::vector<Vec2> user_positions;
  std::vector<double> pa_positions;
  std::vector<double> per_user_se;
  std::vector<double> power_alloc;  // N x K, |W_{n,k}|^2, antenna-major
  std::vector<std::uint8_t> los;    // K x N, user-major
  double reward = 0.0;
};

struct StepInfo {
  double zeta = 0.0;
  int los_count = 0;
  bool fallback = false;  // matched-filter precoder served this slot
  bool loaded = false;    // zero-forcing needed diagonal loading
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  double sum_se = 0.0;
  std::vector<double> per_user_se;
  double movement_cost = 0.0;  // sum of realized |dx|, m
  bool done = false;
  StepInfo info;
  StepRecord record;
};

// Counts violations of the position, displacement and power constraints.
struct ConstraintMonitor {
  std::uint64_t checked_steps = 0;
  std::uint64_t position_violations = 0;
  std::uint64_t displacement_violations = 0;
  std::uint64_t power_violations = 0;

  std::uint64_t total() const {
    return position_violations + displacement_violations + power_violations;
  }
  void merge(const ConstraintMonitor& other);
};

// Layout: per user (x/D, y/D, vx/vmax, vy/vmax); per antenna x/D; per
// (user, antenna), user-major: normalized gain in [0, 1] then LoS flag.
Observation build_observation(const EnvState& state, const EnvConfig& config);

// 10 log10(|h|^2) clipped to [db_min, db_max] and mapped onto [0, 1].
double normalized_gain(cdouble h, double db_min, double db_max);

class Environment {
 public:
  explicit Environment(EnvConfig config);

  // Users per the mobility model; antennas at the waveguide centers;
  // blockage drawn from the stationary distribution. Deterministic in seed.
  Observation reset(std::uint64_t seed);

  // Action entries must lie in [-1, 1]; values within 1e-6 outside are
  // clipped, anything further throws std::invalid_argument.
  StepResult step(std::span<const double> action);

  // Replaces Gauss-Markov motion by the L-shape path (case study).
  void set_trajectory(std::optional<LShapeParams> trajectory);

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const ConstraintMonitor& constraints() const { return monitor_; }

 private:
  std::vector<CVector> refresh_channels(bool initial);

  EnvConfig config_;
  EnvState state_;
  std::vector<Rng> mobility_streams_;
  std::vector<LinkStreams> link_streams_;  // K x N
  std::optional<LShapeParams> trajectory_;
  ConstraintMonitor monitor_;
  bool ready_ = false;
};

}  // namespace pass
