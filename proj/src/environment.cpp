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

#include "pass/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pass {

void EnvConfig::validate() const {
  if (num_users == 0) throw std::invalid_argument("system.num_users must be >= 1");
  if (num_antennas() < num_users) throw std::invalid_argument("N must be >= K");
  for (std::size_t n = 1; n < waveguide_y.size(); ++n)
    if (!(waveguide_y[n] > waveguide_y[n - 1]))
      throw std::invalid_argument("system.waveguide_y must be strictly increasing");
  if (!(area_side > 0.0)) throw std::invalid_argument("system.area_side must be > 0");
  if (!(max_slide > 0.0)) throw std::invalid_argument("system.max_slide must be > 0");
  if (!(move_weight >= 0.0)) throw std::invalid_argument("system.move_weight must be >= 0");
  if (!(p_max > 0.0)) throw std::invalid_argument("system.p_max must be > 0");
  if (!(effective_index > 0.0))
    throw std::invalid_argument("system.effective_index must be > 0");
  if (episode_length <= 0) throw std::invalid_argument("system.episode_length must be > 0");
  if (!(gain_db_max > gain_db_min))
    throw std::invalid_argument("env.gain_db_max must exceed env.gain_db_min");
  mobility.validate();
  channel.validate();
  if (mobility.area_side != area_side)
    throw std::invalid_argument("mobility area side must equal system.area_side");
}

void ConstraintMonitor::merge(const ConstraintMonitor& other) {
  checked_steps += other.checked_steps;
  position_violations += other.position_violations;
  displacement_violations += other.displacement_violations;
  power_violations += other.power_violations;
}

double normalized_gain(cdouble h, double db_min, double db_max) {
  const double db = 10.0 * std::log10(std::norm(h));
  const double clipped = std::clamp(db, db_min, db_max);
  return (clipped - db_min) / (db_max - db_min);
}

Observation build_observation(const EnvState& state, const EnvConfig& config) {
  const std::size_t k_users = state.users.size();
  const std::size_t n_pas = state.antennas.size();
  const double d = config.area_side;
  const double vmax = config.mobility.v_max;
  Observation obs;
  obs.vec.reserve(4 * k_users + n_pas + 2 * k_users * n_pas);
  for (const auto& u : state.users) {
    obs.vec.push_back(u.position.x / d);
    obs.vec.push_back(u.position.y / d);
    obs.vec.push_back(u.velocity.x / vmax);
    obs.vec.push_back(u.velocity.y / vmax);
  }
  for (double x : state.antennas.x) obs.vec.push_back(x / d);
  for (std::size_t k = 0; k < k_users; ++k)
    for (std::size_t n = 0; n < n_pas; ++n) {
      const LinkState& link = state.link(k, n);
      obs.vec.push_back(normalized_gain(link.h, config.gain_db_min, config.gain_db_max));
      obs.vec.push_back(link.los ? 1.0 : 0.0);
    }
  return obs;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
}

void Environment::set_trajectory(std::optional<LShapeParams> trajectory) {
  if (trajectory && trajectory->users.size() != config_.num_users)
    throw std::invalid_argument("trajectory must define one path per user");
  trajectory_ = std::move(trajectory);
}

std::vector<CVector> Environment::refresh_channels(bool initial) {
  const std::size_t n_pas = config_.num_antennas();
  std::vector<CVector> h(config_.num_users);
  for (std::size_t k = 0; k < config_.num_users; ++k) {
    std::span<LinkState> links(state_.links.data() + k * n_pas, n_pas);
    std::span<LinkStreams> streams(link_streams_.data() + k * n_pas, n_pas);
    h[k] = initial ? init_channel_vector(state_.users[k], state_.antennas, links,
                                         config_.channel, streams)
                   : channel_vector(state_.users[k], state_.antennas, links,
                                    config_.channel, streams);
  }
  return h;
}

Observation Environment::reset(std::uint64_t seed) {
  const std::size_t k_users = config_.num_users;
  const std::size_t n_pas = config_.num_antennas();

  mobility_streams_.clear();
  link_streams_.clear();
  for (std::size_t k = 0; k < k_users; ++k) {
    mobility_streams_.push_back(make_stream(seed, "mobility", {k}));
    for (std::size_t n = 0; n < n_pas; ++n)
      link_streams_.push_back(
          {make_stream(seed, "blockage", {k, n}), make_stream(seed, "fading", {k, n})});
  }

  state_ = EnvState{};
  state_.antennas.y_wg = config_.waveguide_y;
  state_.antennas.x.assign(n_pas, config_.area_side / 2.0);
  state_.antennas.guided_wavelength = config_.guided_wavelength();
  state_.antennas.height = config_.channel.pa_height;
  state_.antennas.length = config_.area_side;
  state_.last_displacements.assign(n_pas, 0.0);
  state_.links.assign(k_users * n_pas, LinkState{});
  state_.users.resize(k_users);
  for (std::size_t k = 0; k < k_users; ++k)
    state_.users[k] = trajectory_ ? lshape_trajectory(*trajectory_, k, 0)
                                  : initial_user_state(config_.mobility, mobility_streams_[k]);

  refresh_channels(true);
  ready_ = true;
  return build_observation(state_, config_);
}

StepResult Environment::step(std::span<const double> action) {
  if (!ready_) throw std::logic_error("Environment::step called before reset");
  if (state_.t >= config_.episode_length)
    throw std::logic_error("Environment::step called after episode end");
  const std::size_t k_users = config_.num_users;
  const std::size_t n_pas = config_.num_antennas();
  if (action.size() != n_pas)
    throw std::invalid_argument("action must have one entry per antenna");

  // Antennas move first.
  StepResult out;
  for (std::size_t n = 0; n < n_pas; ++n) {
    double a = action[n];
    if (!std::isfinite(a) || a < -1.0 - 1e-6 || a > 1.0 + 1e-6)
      throw std::invalid_argument("action entry " + std::to_string(n) +
                                  " outside [-1, 1]");
    a = std::clamp(a, -1.0, 1.0);
    const double old_x = state_.antennas.x[n];
    const double new_x = std::clamp(old_x + a * config_.max_slide, 0.0, config_.area_side);
    state_.antennas.x[n] = new_x;
    state_.last_displacements[n] = new_x - old_x;
    out.movement_cost += std::abs(new_x - old_x);
  }

  // Then users.
  const int next_t = state_.t + 1;
  for (std::size_t k = 0; k < k_users; ++k)
    state_.users[k] = trajectory_ ? lshape_trajectory(*trajectory_, k, next_t)
                                  : step_mobility(state_.users[k], config_.mobility,
                                                  mobility_streams_[k]);
  state_.t = next_t;

  // Then the channel and the inner zero-forcing problem.
  const std::vector<CVector> h = refresh_channels(false);
  const CMatrix g = pinching_matrix(state_.antennas);
  const CMatrix h_eff = effective_channel(h, g);
  PrecodeResult pre;
  LinkQuality quality;
  try {
    pre = zf_precoder(h_eff, config_.p_max);
    quality = snr_and_se(h, g, pre.w, config_.channel.noise_power);
  } catch (const SingularChannel&) {
    pre = matched_filter_precoder(h_eff, config_.p_max);
    quality = sinr_and_se(h, g, pre.w, config_.channel.noise_power);
    out.info.fallback = true;
  }
  pre.snr = quality.snr;
  pre.se = quality.se;

  out.sum_se = quality.sum_se;
  out.per_user_se = quality.se;
  out.reward = out.sum_se - config_.move_weight * out.movement_cost;
  out.done = state_.t >= config_.episode_length;
  out.info.zeta = pre.zeta;
  out.info.loaded = pre.loaded;

  // Constraint bookkeeping.
  ++monitor_.checked_steps;
  for (std::size_t n = 0; n < n_pas; ++n) {
    const double x = state_.antennas.x[n];
    if (!(x >= 0.0 && x <= config_.area_side)) ++monitor_.position_violations;
    if (!(std::abs(state_.last_displacements[n]) <= config_.max_slide * (1.0 + 1e-12)))
      ++monitor_.displacement_violations;
  }
  if (!(pre.w.frobenius_norm_sq() <= config_.p_max * (1.0 + 1e-12))) ++monitor_.power_violations;

  StepRecord& rec = out.record;
  rec.t = state_.t;
  for (const auto& u : state_.users) rec.user_positions.push_back(u.position);
  rec.pa_positions = state_.antennas.x;
  rec.per_user_se = quality.se;
  rec.power_alloc.resize(n_pas * k_users);
  for (std::size_t n = 0; n < n_pas; ++n)
    for (std::size_t k = 0; k < k_users; ++k)
      rec.power_alloc[n * k_users + k] = std::norm(pre.w(n, k));
  rec.los.resize(k_users * n_pas);
  for (std::size_t i = 0; i < state_.links.size(); ++i) {
    rec.los[i] = state_.links[i].los ? 1 : 0;
    out.info.los_count += rec.los[i];
  }
  rec.reward = out.reward;

  out.obs = build_observation(state_, config_);
  return out;
}

}  // namespace pass
