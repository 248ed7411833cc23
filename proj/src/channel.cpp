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

#include "pass/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pass/log.hpp"

namespace pass {

void AntennaConfig::validate() const {
  if (x.size() != y_wg.size())
    throw std::invalid_argument("antenna positions and waveguide list differ in length");
  if (x.empty()) throw std::invalid_argument("at least one waveguide is required");
  if (!(guided_wavelength > 0.0))
    throw std::invalid_argument("guided wavelength must be > 0");
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!(x[n] >= 0.0 && x[n] <= length))
      throw std::invalid_argument("antenna " + std::to_string(n) +
                                  " outside [0, D]");
    if (n > 0 && !(y_wg[n] > y_wg[n - 1]))
      throw std::invalid_argument("waveguide y-coordinates must be strictly increasing");
  }
}

ChannelParams ChannelParams::defaults(double carrier_freq) {
  ChannelParams p;
  p.carrier_freq = carrier_freq;
  p.derive_from_carrier();
  return p;
}

void ChannelParams::derive_from_carrier() {
  wavelength = kSpeedOfLight / carrier_freq;
  const double amp = wavelength / (4.0 * kPi);
  ref_gain = amp * amp;
}

void ChannelParams::validate() const {
  if (!(carrier_freq > 0.0)) throw std::invalid_argument("channel.carrier_freq must be > 0");
  if (!(std::abs(wavelength - kSpeedOfLight / carrier_freq) <=
        1e-9 * (kSpeedOfLight / carrier_freq)))
    throw std::invalid_argument("channel.wavelength inconsistent with carrier_freq");
  if (!(eta_los > 0.0)) throw std::invalid_argument("channel.eta_los must be > 0");
  if (!(eta_nlos > 0.0)) throw std::invalid_argument("channel.eta_nlos must be > 0");
  if (!(ref_gain > 0.0)) throw std::invalid_argument("channel.ref_gain must be > 0");
  if (!(blockage_persistence >= 0.0 && blockage_persistence < 1.0))
    throw std::invalid_argument("channel.blockage_persistence must lie in [0, 1)");
  if (!(noise_power > 0.0)) throw std::invalid_argument("channel.noise_power must be > 0");
  if (!(pa_height > user_height))
    throw std::invalid_argument("channel.pa_height must exceed channel.user_height");
}

double los_probability(double d2d) {
  if (!(d2d > 0.0)) throw std::domain_error("los_probability: distance must be > 0");
  if (d2d <= 18.0) return 1.0;
  const double r = 18.0 / d2d;
  return r + std::exp(-d2d / 36.0) * (1.0 - r);
}

double los_transition_probability(bool current_los, double p_target, double q) {
  return q * (current_los ? 1.0 : 0.0) + (1.0 - q) * p_target;
}

bool step_blockage(bool current_los, double p_target, double q, Rng& rng) {
  return uniform01(rng) < los_transition_probability(current_los, p_target, q);
}

double path_loss(double d3d, bool los, const ChannelParams& params) {
  if (d3d < 1.0) {
    log_warning("path_loss: distance below 1 m clamped to 1 m");
    d3d = 1.0;
  }
  const double eta = los ? params.eta_los : params.eta_nlos;
  return params.ref_gain * std::pow(d3d, -eta);
}

cdouble small_scale(bool los, double d3d, const ChannelParams& params, Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  if (los) return std::polar(1.0, -2.0 * kPi * d3d / params.wavelength);
  const double s = std::sqrt(0.5);
  return {s * re, s * im};
}

void link_geometry(const UserState& user, const AntennaConfig& antennas,
                   std::size_t n, const ChannelParams& params, LinkState& link) {
  const double dx = antennas.x[n] - user.position.x;
  const double dy = antennas.y_wg[n] - user.position.y;
  const double dz = params.pa_height - params.user_height;
  link.d2d = std::hypot(dx, dy);
  link.d3d = std::sqrt(link.d2d * link.d2d + dz * dz);
}

namespace {

// A user directly below an antenna is inside the always-LoS radius.
double safe_los_probability(double d2d) {
  return los_probability(std::max(d2d, std::numeric_limits<double>::min()));
}

void check_sizes(const AntennaConfig& antennas, std::span<LinkState> links,
                 std::span<LinkStreams> streams) {
  if (links.size() != antennas.size() || streams.size() != antennas.size())
    throw std::invalid_argument("channel_vector: one link and stream per antenna required");
}

}  // namespace

std::vector<cdouble> init_channel_vector(const UserState& user,
                                         const AntennaConfig& antennas,
                                         std::span<LinkState> links,
                                         const ChannelParams& params,
                                         std::span<LinkStreams> streams) {
  check_sizes(antennas, links, streams);
  std::vector<cdouble> h(antennas.size());
  for (std::size_t n = 0; n < antennas.size(); ++n) {
    LinkState& link = links[n];
    link_geometry(user, antennas, n, params, link);
    link.los = uniform01(streams[n].blockage) < safe_los_probability(link.d2d);
    const double beta = path_loss(link.d3d, link.los, params);
    link.h = std::sqrt(beta) * small_scale(link.los, link.d3d, params, streams[n].fading);
    h[n] = link.h;
  }
  return h;
}

std::vector<cdouble> channel_vector(const UserState& user,
                                    const AntennaConfig& antennas,
                                    std::span<LinkState> links,
                                    const ChannelParams& params,
                                    std::span<LinkStreams> streams) {
  check_sizes(antennas, links, streams);
  std::vector<cdouble> h(antennas.size());
  for (std::size_t n = 0; n < antennas.size(); ++n) {
    LinkState& link = links[n];
    link_geometry(user, antennas, n, params, link);
    link.los = step_blockage(link.los, safe_los_probability(link.d2d),
                             params.blockage_persistence, streams[n].blockage);
    const double beta = path_loss(link.d3d, link.los, params);
    link.h = std::sqrt(beta) * small_scale(link.los, link.d3d, params, streams[n].fading);
    h[n] = link.h;
  }
  return h;
}

}  // namespace pass
