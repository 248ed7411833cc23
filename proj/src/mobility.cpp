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

#include "pass/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pass {

void MobilityParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("mobility.alpha must lie in [0, 1)");
  if (!(noise_std >= 0.0))
    throw std::invalid_argument("mobility.noise_std must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("mobility.dt must be > 0");
  if (!(v_max > 0.0)) throw std::invalid_argument("mobility.v_max must be > 0");
  if (!(area_side > 0.0))
    throw std::invalid_argument("mobility.area_side must be > 0");
}

Vec2 clip_speed(Vec2 velocity, double v_max) {
  const double speed = velocity.norm();
  if (speed <= v_max) return velocity;
  return (v_max / speed) * velocity;
}

void reflect_coordinate(double& coord, double& velocity, double side) {
  while (coord < 0.0 || coord > side) {
    if (coord < 0.0) {
      coord = -coord;
    } else {
      coord = 2.0 * side - coord;
    }
    velocity = -velocity;
  }
}

UserState step_mobility(const UserState& state, const MobilityParams& params,
                        Vec2 innovation) {
  const double a = params.alpha;
  Vec2 v = a * state.velocity + (1.0 - a) * params.mean_velocity + innovation;
  v = clip_speed(v, params.v_max);
  Vec2 p = state.position + params.dt * v;
  reflect_coordinate(p.x, v.x, params.area_side);
  reflect_coordinate(p.y, v.y, params.area_side);
  return {p, v};
}

UserState step_mobility(const UserState& state, const MobilityParams& params,
                        Rng& rng) {
  Vec2 xi{0.0, 0.0};
  if (params.noise_std > 0.0) {
    xi.x = params.noise_std * standard_normal(rng);
    xi.y = params.noise_std * standard_normal(rng);
  }
  return step_mobility(state, params, xi);
}

UserState initial_user_state(const MobilityParams& params, Rng& rng) {
  const double lo = 0.1 * params.area_side;
  const double hi = 0.9 * params.area_side;
  UserState s;
  s.position.x = uniform(rng, lo, hi);
  s.position.y = uniform(rng, lo, hi);
  Vec2 v = params.mean_velocity;
  v.x += params.noise_std * standard_normal(rng);
  v.y += params.noise_std * standard_normal(rng);
  s.velocity = clip_speed(v, params.v_max);
  return s;
}

LShapeParams LShapeParams::defaults() {
  LShapeParams p;
  p.users = {
      {{10.0, 20.0}, 48.0, 48.0},
      {{90.0, 35.0}, -48.0, 48.0},
      {{20.0, 90.0}, 48.0, -48.0},
  };
  return p;
}

namespace {

Vec2 lshape_position(const LShapeUser& u, double travelled) {
  const double lx = std::abs(u.leg_x);
  const double ly = std::abs(u.leg_y);
  const double sx = u.leg_x < 0.0 ? -1.0 : 1.0;
  const double sy = u.leg_y < 0.0 ? -1.0 : 1.0;
  // Snap to the corner so the turn step lands on the waypoint exactly.
  if (std::abs(travelled - lx) <= 1e-9 * std::max(1.0, lx))
    return {u.start.x + u.leg_x, u.start.y};
  if (travelled < lx) return {u.start.x + sx * travelled, u.start.y};
  const double along = std::min(travelled - lx, ly);
  return {u.start.x + u.leg_x, u.start.y + sy * along};
}

}  // namespace

Vec2 lshape_corner(const LShapeParams& params, std::size_t k) {
  if (k >= params.users.size())
    throw std::out_of_range("lshape user index " + std::to_string(k));
  const auto& u = params.users[k];
  return {u.start.x + u.leg_x, u.start.y};
}

UserState lshape_trajectory(const LShapeParams& params, std::size_t k, int t) {
  if (k >= params.users.size())
    throw std::out_of_range("lshape user index " + std::to_string(k));
  if (t < 0 || t > params.episode_length)
    throw std::out_of_range("lshape timestep " + std::to_string(t) +
                            " outside [0, " +
                            std::to_string(params.episode_length) + "]");
  const auto& u = params.users[k];
  const double step = params.speed * params.dt;
  const Vec2 here = lshape_position(u, step * t);
  Vec2 vel;
  if (t > 0) {
    vel = (1.0 / params.dt) * (here - lshape_position(u, step * (t - 1)));
  } else {
    vel = (1.0 / params.dt) * (lshape_position(u, step) - here);
  }
  return {here, vel};
}

}  // namespace pass
