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
#include "pass/neural.hpp"

using namespace pass;

TEST_CASE("forward hand examples") {
  SUBCASE("zero weights return the output bias") {
    Mlp net({3, 5, 2});
    net.bias(1, 0) = 0.25;
    net.bias(1, 1) = -4.0;
    net.touch();
    const auto y = net.forward(std::vector<double>{1, 2, 3});
    CHECK(y[0] == 0.25);
    CHECK(y[1] == -4.0);
  }
  SUBCASE("1-1-1 net: relu(2 x + 1) through an identity output") {
    Mlp net({1, 1, 1});
    net.weight(0, 0, 0) = 2.0;
    net.bias(0, 0) = 1.0;
    net.weight(1, 0, 0) = 1.0;
    net.touch();
    CHECK(net.forward(std::vector<double>{3.0})[0] == 7.0);
  }
  SUBCASE("relu on the negative side") {
    Mlp net({1, 1, 1});
    net.weight(0, 0, 0) = 1.0;
    net.weight(1, 0, 0) = 1.0;
    net.touch();
    CHECK(net.forward(std::vector<double>{-1.0})[0] == 0.0);
  }
  SUBCASE("shape mismatch") {
    Mlp net({3, 2});
    CHECK_THROWS_AS(net.forward(std::vector<double>{1, 2}), std::invalid_argument);
  }
}

TEST_CASE("backward") {
  SUBCASE("linear layer gradient is the input outer product") {
    Mlp net({3, 2});
    Rng rng(1);
    for (double& p : net.params()) p = uniform(rng, -1, 1);
    net.touch();
    Matrix x(1, 3);
    x(0, 0) = 1.5;
    x(0, 1) = -2.0;
    x(0, 2) = 0.5;
    Matrix dy(1, 2);
    dy(0, 0) = 1.0;
    dy(0, 1) = 3.0;
    MlpCache cache;
    net.forward(x, &cache);
    std::vector<double> g(net.num_params());
    net.backward(cache, dy, g, nullptr);
    // Layout: weight(i, o) at i * out + o, then the bias.
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t o = 0; o < 2; ++o) CHECK(g[i * 2 + o] == x(0, i) * dy(0, o));
    CHECK(g[6] == 1.0);
    CHECK(g[7] == 3.0);
  }
  SUBCASE("zero output gradient") {
    Rng rng(2);
    Mlp net = Mlp::create({4, 8, 3}, rng, 1.0);
    Matrix x(2, 4, 0.3);
    MlpCache cache;
    net.forward(x, &cache);
    std::vector<double> g(net.num_params(), 7.0);
    Matrix dx;
    net.backward(cache, Matrix(2, 3), g, &dx);
    for (double v : g) CHECK(v == 0.0);
    for (std::size_t i = 0; i < dx.size(); ++i) CHECK(dx.data()[i] == 0.0);
  }
  SUBCASE("stale and foreign caches are rejected") {
    Rng rng(3);
    Mlp net = Mlp::create({2, 4, 1}, rng);
    Mlp other = net;
    MlpCache cache;
    net.forward(Matrix(1, 2, 1.0), &cache);
    std::vector<double> g(net.num_params());
    CHECK_THROWS_AS(other.backward(cache, Matrix(1, 1, 1.0), g, nullptr), std::logic_error);
    net.touch();
    CHECK_THROWS_AS(net.backward(cache, Matrix(1, 1, 1.0), g, nullptr), std::logic_error);
  }
}

TEST_CASE("finite-difference gradient check on random small networks") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    Mlp net = oracle::random_small_net(rng);
    Matrix x(3, net.input_size()), proj(3, net.output_size());
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = uniform(rng, -1, 1);
    for (std::size_t i = 0; i < proj.size(); ++i) proj.data()[i] = uniform(rng, -1, 1);
    const auto r = oracle::gradient_check(net, x, proj);
    CHECK(r.rel_error < 1e-4);
    CHECK(r.input_rel_error < 1e-4);
  }
}

TEST_CASE("initialization bounds") {
  Rng rng(4);
  Mlp net = Mlp::create({10, 20, 5}, rng, 1e-2);
  const double b0 = 1.0 / std::sqrt(10.0), b1 = 1e-2 / std::sqrt(20.0);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t o = 0; o < 20; ++o) CHECK(std::abs(net.weight(0, i, o)) <= b0);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t o = 0; o < 5; ++o) CHECK(std::abs(net.weight(1, i, o)) <= b1);
  Rng again(4);
  CHECK(Mlp::create({10, 20, 5}, again, 1e-2) == net);
}

TEST_CASE("forward agrees across kernel variants") {
  Rng rng(5);
  Mlp net = Mlp::create({40, 256, 256, 8}, rng, 1.0);
  Matrix x(33, 40);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = uniform(rng, -1, 1);
  net.set_kernels(kernels::scalar_kernels());
  const Matrix ref = net.forward(x);
  for (const auto* t : kernels::available()) {
    net.set_kernels(*t);
    const Matrix y = net.forward(x);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(std::abs(y.data()[i] - ref.data()[i]) <= 1e-12 * std::max(1.0, std::abs(ref.data()[i])));
  }
}

TEST_CASE("adam") {
  SUBCASE("zero gradients leave the parameters and advance the step") {
    std::vector<double> p{1.0, -2.0}, g{0.0, 0.0};
    AdamState st(2, 3e-4);
    adam_step(p, g, st);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == -2.0);
    CHECK(st.step == 1);
  }
  SUBCASE("first step moves by about lr against the gradient sign") {
    std::vector<double> p{0.0, 0.0, 0.0}, g{5.0, -0.01, 1e3};
    AdamState st(3, 1e-3);
    adam_step(p, g, st);
    CHECK(p[0] == doctest::Approx(-1e-3).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(1e-3).epsilon(1e-4));
    CHECK(p[2] == doctest::Approx(-1e-3).epsilon(1e-6));
  }
  SUBCASE("constant gradient keeps moving downhill") {
    std::vector<double> p{1.0}, g{2.0};
    AdamState st(1, 1e-2);
    adam_step(p, g, st);
    const double after1 = p[0];
    adam_step(p, g, st);
    CHECK(after1 < 1.0);
    CHECK(p[0] < after1);
  }
  SUBCASE("shape mismatch") {
    std::vector<double> p{1.0}, g{1.0, 2.0};
    AdamState st(1, 1e-3);
    CHECK_THROWS_AS(adam_step(p, g, st), std::invalid_argument);
  }
}

TEST_CASE("polyak averaging") {
  Rng rng(6);
  Mlp src = Mlp::create({4, 6, 2}, rng, 1.0);
  Mlp dst = Mlp::create({4, 6, 2}, rng, 1.0);
  const Mlp old = dst;
  polyak_update(dst, src, 0.005);
  for (std::size_t i = 0; i < dst.num_params(); ++i)
    CHECK(std::abs(dst.params()[i] - (0.995 * old.params()[i] + 0.005 * src.params()[i])) <= 1e-12);
  Mlp hard = old;
  polyak_update(hard, src, 1.0);
  CHECK(hard == src);
  Mlp frozen = old;
  polyak_update(frozen, src, 0.0);
  CHECK(frozen == old);
  Mlp wrong({4, 5, 2});
  CHECK_THROWS_AS(polyak_update(wrong, src, 0.5), std::invalid_argument);
}

TEST_CASE("checkpoint round trip is bit exact") {
  Rng rng(7);
  Mlp net = Mlp::create({40, 256, 256, 8}, rng);
  net.params()[3] = std::nextafter(0.1, 1.0);
  net.params()[4] = -0.0;
  net.touch();
  std::stringstream buf;
  write_mlp(buf, net);
  const Mlp back = read_mlp(buf);
  CHECK(back == net);
  CHECK(std::signbit(back.params()[4]));

  std::string bytes;
  {
    std::stringstream b2;
    write_mlp(b2, net);
    bytes = b2.str();
  }
  CHECK(bytes.substr(0, 8) == std::string("PASSMLP\0", 8));
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_mlp(truncated), std::runtime_error);
  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream bad_magic(bad);
  CHECK_THROWS_AS(read_mlp(bad_magic), std::runtime_error);
}
