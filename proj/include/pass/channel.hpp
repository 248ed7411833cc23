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

// Time-varying PA-to-user channel: UMi LoS probability, Markov blockage,
// distance path loss and LoS/NLoS small-scale fading.

#include <complex>
#include <span>
#include <vector>

#include "pass/antenna.hpp"
#include "pass/mobility.hpp"
#include "pass/rng.hpp"

namespace pass {

using cdouble = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

struct LinkState {
  bool los = true;
  double d2d = 0.0;  // horizontal distance, m
  double d3d = 0.0;  // slant distance, m
  cdouble h{0.0, 0.0};
};

struct ChannelParams {
  double carrier_freq = 28e9;  // Hz
  double wavelength = 0.0;     // m, c / f
  double pa_height = 10.0;     // m
  double user_height = 1.5;    // m
  double eta_los = 2.1;
  double eta_nlos = 3.19;
  double ref_gain = 0.0;              // path gain at 1 m
  double blockage_persistence = 0.8;  // q in [0, 1)
  double noise_power = 1e-10;         // relative to P_max = 1

  // Defaults with wavelength and the 1 m Friis gain derived from the
  // carrier frequency.
  static ChannelParams defaults(double carrier_freq = 28e9);

  // Recomputes wavelength and ref_gain from carrier_freq.
  void derive_from_carrier();

  void validate() const;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

// UMi street-canyon LoS probability. Throws std::domain_error for d2d <= 0.
double los_probability(double d2d);

// Probability that the next slot is LoS under persistence q.
double los_transition_probability(bool current_los, double p_target, double q);

// Advances the blockage chain by one slot. Always consumes exactly one
// uniform draw.
bool step_blockage(bool current_los, double p_target, double q, Rng& rng);

// beta = ref_gain * d3d^-eta. Distances under 1 m are clamped to 1 m.
double path_loss(double d3d, bool los, const ChannelParams& params);

// LoS: exp(-j 2 pi d3d / lambda). NLoS: CN(0, 1). Always consumes two
// normal draws so the stream position does not depend on the link state.
cdouble small_scale(bool los, double d3d, const ChannelParams& params, Rng& rng);

// Random streams owned by one (user, PA) link.
struct LinkStreams {
  Rng blockage;
  Rng fading;
};

// Horizontal and slant distance from antenna n to the user.
void link_geometry(const UserState& user, const AntennaConfig& antennas,
                   std::size_t n, const ChannelParams& params, LinkState& link);

// Recomputes geometry, samples the initial blockage state from the
// stationary (LoS-probability) distribution and draws fading.
std::vector<cdouble> init_channel_vector(const UserState& user,
                                         const AntennaConfig& antennas,
                                         std::span<LinkState> links,
                                         const ChannelParams& params,
                                         std::span<LinkStreams> streams);

// Per antenna: recompute geometry, advance blockage with the current LoS
// probability as target, redraw fading and set h = sqrt(beta) * fading.
// Returns the user's channel vector across all antennas.
std::vector<cdouble> channel_vector(const UserState& user,
                                    const AntennaConfig& antennas,
                                    std::span<LinkState> links,
                                    const ChannelParams& params,
                                    std::span<LinkStreams> streams);

}  // namespace pass
