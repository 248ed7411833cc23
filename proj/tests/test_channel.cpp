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

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pass/channel.hpp"

using namespace pass;

TEST_CASE("LoS probability") {
  CHECK(los_probability(10.0) == 1.0);
  CHECK(los_probability(18.0) == 1.0);
  CHECK(los_probability(36.0) == doctest::Approx(0.5 + 0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(los_probability(36.0) == doctest::Approx(0.683940).epsilon(1e-6));
  CHECK(los_probability(1e-9) == 1.0);
  CHECK_THROWS_AS(los_probability(0.0), std::domain_error);
  CHECK_THROWS_AS(los_probability(-3.0), std::domain_error);
  // Just above the branch point the far formula must agree with 1.
  CHECK(los_probability(std::nextafter(18.0, 19.0)) == doctest::Approx(1.0).epsilon(1e-14));
  for (double d : {20.0, 50.0, 100.0, 150.0}) {
    const double p = los_probability(d);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("blockage transition probabilities") {
  CHECK(los_transition_probability(true, 0.5, 0.8) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(los_transition_probability(false, 0.5, 0.8) == doctest::Approx(0.1).epsilon(1e-15));
  // Zero persistence is memoryless.
  CHECK(los_transition_probability(true, 0.37, 0.0) == 0.37);
  CHECK(los_transition_probability(false, 0.37, 0.0) == 0.37);

  SUBCASE("exactly one uniform draw per step") {
    Rng a(5), b(5);
    step_blockage(true, 0.3, 0.8, a);
    uniform01(b);
    CHECK(a() == b());
  }
  SUBCASE("p = 1 and p = 0 with q = 0 are deterministic") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
      CHECK(step_blockage(false, 1.0, 0.0, rng));
      CHECK_FALSE(step_blockage(true, 0.0, 0.0, rng));
    }
  }
}

TEST_CASE("path loss") {
  const ChannelParams p = ChannelParams::defaults(28e9);
  CHECK(p.wavelength == doctest::Approx(kSpeedOfLight / 28e9).epsilon(1e-15));
  CHECK(p.ref_gain == doctest::Approx(7.258e-7).epsilon(1e-3));
  CHECK(path_loss(1.0, true, p) == p.ref_gain);
  CHECK(path_loss(10.0, true, p) == doctest::Approx(5.765e-9).epsilon(1e-3));
  ChannelParams two = p;
  two.eta_los = 2.0;
  CHECK(path_loss(10.0, true, two) == doctest::Approx(p.ref_gain * 1e-2).epsilon(1e-14));
  CHECK(path_loss(10.0, false, p) ==
        doctest::Approx(p.ref_gain * std::pow(10.0, -3.19)).epsilon(1e-14));
  CHECK(path_loss(0.2, true, p) == p.ref_gain);  // clamped
  double prev = path_loss(1.0, false, p);
  for (double d = 1.5; d < 200.0; d += 0.5) {
    const double b = path_loss(d, false, p);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("small-scale fading") {
  const ChannelParams p = ChannelParams::defaults();
  Rng rng(3);
  const cdouble full = small_scale(true, p.wavelength, p, rng);
  CHECK(std::abs(full - cdouble{1.0, 0.0}) < 1e-12);
  const cdouble half = small_scale(true, p.wavelength / 2, p, rng);
  CHECK(std::abs(half - cdouble{-1.0, 0.0}) < 1e-12);
  for (double d : {1.0, 8.7, 55.5, 140.25})
    CHECK(std::abs(std::abs(small_scale(true, d, p, rng)) - 1.0) < 1e-12);

  SUBCASE("two normal draws regardless of state") {
    Rng a(4), b(4);
    small_scale(true, 3.0, p, a);
    small_scale(false, 3.0, p, b);
    CHECK(a() == b());
  }
}

TEST_CASE("channel vector geometry and LoS power") {
  ChannelParams p = ChannelParams::defaults();
  AntennaConfig ant{{50, 50, 50, 50}, {20, 40, 60, 80}, p.wavelength / 1.4, 10.0, 100.0};
  std::vector<LinkState> links(4);
  std::vector<LinkStreams> streams;
  for (int n = 0; n < 4; ++n) streams.push_back({Rng(100 + n), Rng(200 + n)});

  SUBCASE("user directly below an antenna") {
    const UserState u{{50, 40}, {0, 0}};
    init_channel_vector(u, ant, links, p, streams);
    CHECK(links[1].d2d == 0.0);
    CHECK(links[1].los);
    CHECK(links[1].d3d == doctest::Approx(8.5));
  }

  SUBCASE("slant distance identity and |h|^2 = beta for LoS") {
    Rng pos(8);
    for (int i = 0; i < 500; ++i) {
      const UserState u{{uniform(pos, 0, 100), uniform(pos, 0, 100)}, {0, 0}};
      const auto h = channel_vector(u, ant, links, p, streams);
      for (int n = 0; n < 4; ++n) {
        const LinkState& l = links[n];
        CHECK(l.d3d >= l.d2d);
        const double dz = p.pa_height - p.user_height;
        CHECK(std::abs(l.d3d * l.d3d - l.d2d * l.d2d - dz * dz) <= 1e-9 * dz * dz);
        CHECK(std::norm(h[n]) > 0.0);
        CHECK(h[n] == l.h);
        if (l.los)
          CHECK(std::norm(h[n]) == doctest::Approx(path_loss(l.d3d, true, p)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("equidistant LoS antennas see equal magnitudes") {
    p.blockage_persistence = 0.0;
    const UserState u{{50, 50}, {0, 0}};
    AntennaConfig sym{{50, 50}, {45, 55}, ant.guided_wavelength, 10.0, 100.0};
    std::vector<LinkState> two(2);
    std::vector<LinkStreams> s2{{Rng(1), Rng(2)}, {Rng(3), Rng(4)}};
    const auto h = channel_vector(u, sym, two, p, s2);  // d2d = 5 < 18: always LoS
    CHECK(two[0].los);
    CHECK(two[1].los);
    CHECK(std::abs(h[0]) == doctest::Approx(std::abs(h[1])).epsilon(1e-15));
  }

  SUBCASE("size mismatch") {
    std::vector<LinkState> three(3);
    CHECK_THROWS_AS(channel_vector({{1, 1}, {0, 0}}, ant, three, p, streams),
                    std::invalid_argument);
  }
}

TEST_CASE("channel parameter validation") {
  ChannelParams p = ChannelParams::defaults();
  CHECK_NOTHROW(p.validate());
  p.blockage_persistence = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ChannelParams::defaults();
  p.wavelength *= 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ChannelParams::defaults();
  p.eta_nlos = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
