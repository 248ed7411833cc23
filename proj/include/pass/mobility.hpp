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

// Gauss-Markov user mobility and the deterministic L-shape trajectory.

#include <cstddef>
#include <vector>

#include "pass/geometry.hpp"
#include "pass/rng.hpp"

namespace pass {

struct UserState {
  Vec2 position;  // meters, inside [0, D]^2
  Vec2 velocity;  // m/s, |v| <= v_max
};

struct MobilityParams {
  double alpha = 0.85;          // memory level, [0, 1)
  Vec2 mean_velocity{0.0, 0.0};  // asymptotic mean velocity
  double noise_std = 0.3;       // per-axis std of the innovation, m/s
  double dt = 4.0;              // slot duration, s
  double v_max = 1.2;           // speed cap, m/s
  double area_side = 100.0;     // D, meters

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const MobilityParams&, const MobilityParams&) = default;
};

// One Gauss-Markov step with an explicit innovation vector. The velocity
// is speed-clipped (heading preserved) and the position reflected at the
// service-area walls.
UserState step_mobility(const UserState& state, const MobilityParams& params,
                        Vec2 innovation);

// Same, drawing the innovation from rng.
UserState step_mobility(const UserState& state, const MobilityParams& params,
                        Rng& rng);

// Episode-start state: position uniform over [0.1D, 0.9D]^2, velocity the
// mean plus one innovation draw.
UserState initial_user_state(const MobilityParams& params, Rng& rng);

// Mirrors a coordinate back into [0, side]; flips `velocity` once per
// reflection.
void reflect_coordinate(double& coord, double& velocity, double side);

Vec2 clip_speed(Vec2 velocity, double v_max);

// L-shape: walk `leg_x` meters parallel to the x-axis (sign gives the
// direction), turn 90 degrees and walk `leg_y` meters parallel to the
// y-axis. Users stop at the end of the second leg.
struct LShapeUser {
  Vec2 start;
  double leg_x = 0.0;
  double leg_y = 0.0;

  friend bool operator==(const LShapeUser&, const LShapeUser&) = default;
};

struct LShapeParams {
  std::vector<LShapeUser> users;
  double speed = 0.3;  // m/s along the path
  double dt = 4.0;
  int episode_length = 80;

  static LShapeParams defaults();

  friend bool operator==(const LShapeParams&, const LShapeParams&) = default;
};

// Position of user k after t slots; velocity is the backward finite
// difference (forward difference at t = 0). Throws std::out_of_range for
// t outside [0, episode_length] or an unknown user.
UserState lshape_trajectory(const LShapeParams& params, std::size_t k, int t);

// Corner point of user k's path.
Vec2 lshape_corner(const LShapeParams& params, std::size_t k);

}  // namespace pass
