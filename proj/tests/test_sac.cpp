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
#include <sstream>

#include "oracles.hpp"
#include "pass/sac.hpp"

using namespace pass;

namespace {

SacConfig small_config() {
  SacConfig c;
  c.hidden = {16, 16};
  c.batch_size = 4;
  c.buffer_capacity = 64;
  c.warmup_steps = 0;
  return c;
}

Transition make_transition(std::size_t sdim, std::size_t adim, double tag) {
  Transition t;
  t.s.assign(sdim, tag);
  t.a.assign(adim, std::tanh(tag));
  t.r = tag;
  t.s_next.assign(sdim, tag + 0.5);
  return t;
}

// Constant critic: all weights zero, output bias c.
void make_constant(Mlp& net, double c) {
  for (double& p : net.params()) p = 0.0;
  net.bias(net.num_layers() - 1, 0) = c;
  net.touch();
}

}  // namespace

TEST_CASE("replay buffer") {
  ReplayBuffer buf(3, 2, 1);
  Rng rng(1);
  CHECK_THROWS_AS(buf.sample(1, rng), std::logic_error);
  for (int i = 0; i < 3; ++i) buf.push(make_transition(2, 1, i));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).r == 0.0);
  buf.push(make_transition(2, 1, 3));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).r == 1.0);  // exactly the oldest was evicted
  CHECK(buf.at(1).r == 2.0);
  CHECK(buf.at(2).r == 3.0);
  CHECK(buf.at(2).s_next == std::vector<double>{3.5, 3.5});
  CHECK_THROWS_AS(buf.sample(4, rng), std::logic_error);
  for (int i = 0; i < 50; ++i) {
    const TransitionBatch b = buf.sample(3, rng);
    CHECK(b.r.size() == 3);
    for (double r : b.r) CHECK((r == 1.0 || r == 2.0 || r == 3.0));
  }
  CHECK_THROWS_AS(buf.push(make_transition(3, 1, 0)), std::invalid_argument);
}

TEST_CASE("squashed Gaussian density integrates to one") {
  for (double mu : {-1.0, 0.0, 0.3, 1.0})
    for (double ls : {-2.0, -1.0, 0.0, 0.5}) {
      CAPTURE(mu);
      CAPTURE(ls);
      CHECK(std::abs(oracle::squashed_mass(mu, ls) - 1.0) < 1e-3);
    }
}

TEST_CASE("sampled log-probabilities follow the density formula") {
  SacAgent agent(5, 3, small_config(), 11);
  Rng rng(2), copy(2);
  const std::vector<double> s{0.1, -0.2, 0.3, 0.4, 0.5};
  const ActionSample smp = agent.sample_action(s, rng, false);
  const auto out = agent.actor().forward(s);
  std::vector<double> u(3), mu(3), ls(3);
  for (int i = 0; i < 3; ++i) {
    mu[i] = out[i];
    ls[i] = std::clamp(out[3 + i], -20.0, 2.0);
    u[i] = mu[i] + std::exp(ls[i]) * standard_normal(copy);
    CHECK(smp.a[i] == doctest::Approx(std::tanh(u[i])).epsilon(1e-15));
  }
  CHECK(smp.log_prob == doctest::Approx(squashed_gaussian_log_prob(u, mu, ls)).epsilon(1e-12));
}

TEST_CASE("deterministic and saturated actions") {
  SacAgent agent(4, 2, small_config(), 3);
  Mlp& actor = agent.actor();
  for (double& p : actor.params()) p = 0.0;
  actor.bias(actor.num_layers() - 1, 0) = 50.0;   // mu_0
  actor.bias(actor.num_layers() - 1, 1) = -50.0;  // mu_1
  actor.bias(actor.num_layers() - 1, 2) = -20.0;  // log std
  actor.bias(actor.num_layers() - 1, 3) = -20.0;
  actor.touch();
  Rng rng(1);
  const std::vector<double> s(4, 0.0);
  const ActionSample det = agent.sample_action(s, rng, true);
  CHECK(det.a[0] < 1.0);
  CHECK(det.a[1] > -1.0);
  CHECK(det.a[0] > 0.999999);
  CHECK(det.log_prob == 0.0);
  const ActionSample sto = agent.sample_action(s, rng, false);
  CHECK(sto.a[0] < 1.0);
  CHECK(sto.a[1] > -1.0);
  CHECK(std::isfinite(sto.log_prob));

  actor.bias(actor.num_layers() - 1, 0) = 0.0;
  actor.bias(actor.num_layers() - 1, 1) = 0.0;
  actor.touch();
  const ActionSample zero = agent.sample_action(s, rng, false);
  CHECK(std::abs(zero.a[0]) < 1e-7);
  CHECK(std::abs(zero.a[1]) < 1e-7);
  CHECK_THROWS_AS(agent.sample_action(std::vector<double>(3), rng, true), std::invalid_argument);
}

TEST_CASE("soft TD target") {
  CHECK(soft_td_value(1.0, 0.0, 0.99, 2.0, 2.5, 0.2, -1.0) == doctest::Approx(3.178).epsilon(1e-14));
  CHECK(soft_td_value(1.0, 1.0, 0.99, 2.0, 2.5, 0.2, -1.0) == 1.0);
  CHECK(soft_td_value(1.0, 0.0, 0.99, 5.0, 2.0, 0.0, -7.0) == doctest::Approx(2.98).epsilon(1e-14));

  SacAgent agent(3, 2, small_config(), 5);
  make_constant(agent.q1_target(), 2.0);
  make_constant(agent.q2_target(), 3.0);  // forced Q1' != Q2'
  agent.set_log_alpha(std::log(0.2));
  ReplayBuffer buf(4, 3, 2);
  Transition t = make_transition(3, 2, 0.1);
  t.r = 1.0;
  buf.push(t);
  t.done = true;
  t.r = -0.5;
  buf.push(t);
  const std::size_t first[1] = {0}, second[1] = {1};

  SUBCASE("bootstrapped sample uses the smaller target critic") {
    const TransitionBatch b = buf.gather(first);
    Rng rng(9), copy(9);
    const double lp = agent.sample_action(b.s_next.row(0), copy, false).log_prob;
    const auto y = agent.td_target(b, rng);
    CHECK(y[0] == doctest::Approx(1.0 + 0.99 * (2.0 - 0.2 * lp)).epsilon(1e-14));
  }
  SUBCASE("terminal sample") {
    Rng rng(9);
    CHECK(agent.td_target(buf.gather(second), rng)[0] == -0.5);
  }
  SUBCASE("zero temperature gives the clipped double-Q target") {
    agent.set_log_alpha(-1e300);
    Rng rng(9);
    CHECK(agent.td_target(buf.gather(first), rng)[0] == doctest::Approx(1.0 + 0.99 * 2.0).epsilon(1e-15));
  }
}

TEST_CASE("updates") {
  const std::size_t sdim = 6, adim = 2;
  ReplayBuffer buf(64, sdim, adim);
  Rng fill(4);
  for (int i = 0; i < 32; ++i) {
    Transition t = make_transition(sdim, adim, uniform(fill, -1, 1));
    buf.push(t);
  }

  SUBCASE("underfull buffer") {
    SacConfig c = small_config();
    c.batch_size = 40;
    SacAgent agent(sdim, adim, c, 1);
    Rng rng(1);
    CHECK_THROWS_AS(agent.update(buf, rng), std::logic_error);
  }
  SUBCASE("targets track critics by Polyak averaging") {
    SacAgent agent(sdim, adim, small_config(), 1);
    Rng rng(2);
    for (int u = 0; u < 5; ++u) {
      const Mlp old1 = agent.q1_target(), old2 = agent.q2_target();
      agent.update(buf, rng);
      for (std::size_t i = 0; i < old1.num_params(); ++i) {
        CHECK(std::abs(agent.q1_target().params()[i] -
                       (0.995 * old1.params()[i] + 0.005 * agent.q1().params()[i])) <= 1e-12);
        CHECK(std::abs(agent.q2_target().params()[i] -
                       (0.995 * old2.params()[i] + 0.005 * agent.q2().params()[i])) <= 1e-12);
      }
    }
    CHECK(agent.update_count() == 5);
  }
  SUBCASE("tau = 1 copies, tau = 0 freezes") {
    SacConfig c = small_config();
    c.tau = 1.0;
    SacAgent hard(sdim, adim, c, 1);
    Rng rng(3);
    hard.update(buf, rng);
    CHECK(hard.q1_target() == hard.q1());
    CHECK(hard.q2_target() == hard.q2());
    c.tau = 0.0;
    SacAgent frozen(sdim, adim, c, 1);
    const Mlp before = frozen.q1_target();
    frozen.update(buf, rng);
    CHECK(frozen.q1_target() == before);
  }
  SUBCASE("critic loss decreases on a repeated fixed batch") {
    ReplayBuffer one(1, sdim, adim);
    Transition t = make_transition(sdim, adim, 0.3);
    t.done = true;  // deterministic target
    t.r = 5.0;
    one.push(t);
    SacConfig c = small_config();
    c.batch_size = 1;
    SacAgent agent(sdim, adim, c, 8);
    Rng rng(5);
    const std::size_t slot[1] = {0};
    const TransitionBatch b = one.gather(slot);
    const double l1 = agent.update_on(b, rng).critic_loss;
    const double l2 = agent.update_on(b, rng).critic_loss;
    CHECK(l2 < l1);
  }
  SUBCASE("temperature follows the entropy gap") {
    SacAgent agent(sdim, adim, small_config(), 1);
    CHECK(agent.target_entropy() == -2.0);
    CHECK(agent.alpha() == doctest::Approx(1.0));
    Rng rng(6);
    const UpdateStats st = agent.update(buf, rng);
    CHECK(st.alpha == agent.alpha());
    CHECK(agent.alpha() > 0.0);
  }
}

TEST_CASE("agent checkpoint round trip") {
  SacAgent agent(6, 2, small_config(), 12);
  ReplayBuffer buf(16, 6, 2);
  for (int i = 0; i < 8; ++i) buf.push(make_transition(6, 2, 0.1 * i));
  Rng rng(1);
  agent.update(buf, rng);
  agent.set_env_steps(123);
  std::stringstream ss;
  agent.save(ss);
  const SacAgent back = SacAgent::load(ss);
  CHECK(back.actor() == agent.actor());
  CHECK(back.q1() == agent.q1());
  CHECK(back.q2() == agent.q2());
  CHECK(back.q1_target() == agent.q1_target());
  CHECK(back.q2_target() == agent.q2_target());
  CHECK(back.log_alpha() == agent.log_alpha());
  CHECK(back.update_count() == 1);
  CHECK(back.env_steps() == 123);
  CHECK(back.config().hidden == agent.config().hidden);
  CHECK(back.target_entropy() == agent.target_entropy());
  std::istringstream junk("not a checkpoint");
  CHECK_THROWS_AS(SacAgent::load(junk), std::runtime_error);
}

TEST_CASE("short training runs are reproducible") {
  EnvConfig env;
  env.episode_length = 10;
  SacConfig c = small_config();
  c.episodes = 4;
  c.warmup_steps = 15;
  c.batch_size = 8;
  c.validation_interval = 2;
  c.validation_episodes = 1;
  const TrainResult a = train(env, c, 7);
  const TrainResult b = train(env, c, 7);
  REQUIRE(a.curve.size() == 4);
  std::ostringstream ca, cb;
  write_training_curve_csv(ca, a.curve);
  write_training_curve_csv(cb, b.curve);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().rfind("episode,steps,mean_reward,sum_se,critic_loss,actor_loss,alpha\n", 0) == 0);
  CHECK(a.agent.actor() == b.agent.actor());
  CHECK(a.best.has_value());
  for (const auto& r : a.curve) {
    CHECK(r.steps == 10);
    CHECK(r.mean_reward * r.steps <= r.sum_se + 1e-12);
  }
  CHECK(a.constraints.total() == 0);
  const TrainResult other = train(env, c, 8);
  CHECK_FALSE(other.agent.actor() == a.agent.actor());
}
