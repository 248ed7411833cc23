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

#include <filesystem>
#include <stdexcept>
#include <fstream>
#include <sstream>

#include "pass/evaluation.hpp"

using namespace pass;
namespace fs = std::filesystem;

namespace {

EnvConfig short_env() {
  EnvConfig c;
  c.episode_length = 12;
  return c;
}

std::vector<EvalMethod> baselines() {
  return {{"fixed", [](std::size_t) { return std::make_unique<FixedPolicy>(4); }},
          {"random", [](std::size_t) { return std::make_unique<RandomPolicy>(4); }}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("baseline policies") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 250000;
  for (int i = 0; i < n; ++i) {
    const auto a = policy_random(4, rng);
    for (double v : a) {
      REQUIRE(v >= -1.0);
      REQUIRE(v <= 1.0);
      sum += v;
    }
  }
  CHECK(std::abs(sum / (4.0 * n)) < 0.005);
  Rng r1(5), r2(5);
  CHECK(policy_random(4, r1) == policy_random(4, r2));
  CHECK(policy_fixed(4) == std::vector<double>(4, 0.0));
}

TEST_CASE("empirical CDF") {
  const std::vector<double> one{5.0};
  const auto c1 = empirical_cdf(one);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].value == 5.0);
  CHECK(c1[0].fraction == 1.0);

  const std::vector<double> four{3, 1, 4, 2};
  const auto c4 = empirical_cdf(four);
  for (int i = 0; i < 4; ++i) {
    CHECK(c4[i].value == i + 1);
    CHECK(c4[i].fraction == 0.25 * (i + 1));
  }
  CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}), std::invalid_argument);

  SUBCASE("matches a brute-force counting oracle") {
    Rng rng(3);
    std::vector<double> v(1000);
    for (double& x : v) x = std::floor(uniform(rng, 0, 200));  // with ties
    const auto cdf = empirical_cdf(v);
    double prev = 0.0;
    for (const auto& p : cdf) {
      CHECK(p.fraction >= prev);
      prev = p.fraction;
    }
    CHECK(cdf.back().fraction == 1.0);
    for (int t = 0; t < 200; ++t) {
      const double x = t + 0.5 * (t % 2);
      const double count =
          static_cast<double>(std::count_if(v.begin(), v.end(), [&](double y) { return y <= x; }));
      CHECK(cdf_at(cdf, x) == doctest::Approx(count / 1000.0).epsilon(1e-15));
    }
    CHECK(cdf_at(cdf, -1.0) == 0.0);
  }
}

TEST_CASE("improvement arithmetic") {
  CHECK(improvement_pct(343.49, 267.16) == doctest::Approx(28.57).epsilon(1e-3));
  CHECK(improvement_pct(10.0, 10.0) == 0.0);
  CHECK(improvement_pct(9.0, 10.0) == doctest::Approx(-10.0));
}

TEST_CASE("episode aggregation") {
  Environment env(short_env());
  FixedPolicy fixed(4);
  Rng rng(0);
  std::vector<StepResult> steps;
  const double total = run_episode(env, fixed, 99, rng, &steps);
  REQUIRE(steps.size() == 12);
  double manual = 0.0;
  for (const auto& s : steps) manual += s.sum_se;
  CHECK(std::abs(total - manual) <= 1e-12 * manual);
  for (double x : env.state().antennas.x) CHECK(x == 50.0);
}

TEST_CASE("evaluate") {
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const EvalReport r = evaluate(baselines(), short_env(), seeds, 4);
  REQUIRE(r.methods.size() == 2);
  const MethodResult& fixed = r.method("fixed");
  const MethodResult& random = r.method("random");
  CHECK(fixed.improvement_pct == 0.0);
  CHECK_THROWS_AS(r.method("sac"), std::out_of_range);

  SUBCASE("statistics recomputed from the raw episodes") {
    for (const MethodResult* m : {&fixed, &random}) {
      double total = 0.0;
      std::vector<double> means;
      for (const auto& s : m->per_seed) {
        REQUIRE(s.size() == 4);
        double sm = 0.0;
        for (double v : s) sm += v;
        total += sm;
        means.push_back(sm / 4);
      }
      CHECK(m->mean == doctest::Approx(total / 12).epsilon(1e-14));
      const double mu = (means[0] + means[1] + means[2]) / 3;
      double ss = 0.0;
      for (double v : means) ss += (v - mu) * (v - mu);
      CHECK(m->std == doctest::Approx(std::sqrt(ss / 2)).epsilon(1e-12));
      CHECK(m->cdf.size() == 12);
      CHECK(m->cdf.back().fraction == 1.0);
    }
    CHECK(random.improvement_pct ==
          doctest::Approx(100 * (random.mean - fixed.mean) / fixed.mean).epsilon(1e-14));
  }
  SUBCASE("repeatable, and independent of the worker count") {
    const EvalReport again = evaluate(baselines(), short_env(), seeds, 4, "fixed", 3);
    CHECK(again.method("fixed").per_seed == fixed.per_seed);
    CHECK(again.method("random").per_seed == random.per_seed);
  }
  SUBCASE("methods share channel draws") {
    // A second copy of the fixed policy under another name sees the same
    // episodes, so its results are identical.
    auto methods = baselines();
    methods.push_back({"fixed-copy", [](std::size_t) { return std::make_unique<FixedPolicy>(4); }});
    const EvalReport r3 = evaluate(methods, short_env(), seeds, 4);
    CHECK(r3.method("fixed-copy").per_seed == r3.method("fixed").per_seed);
  }
  CHECK(r.constraints.total() == 0);
  CHECK_THROWS_AS(evaluate(baselines(), short_env(), {}, 4), std::invalid_argument);
}

TEST_CASE("case study snapshots and CSV artifacts") {
  FixedPolicy fixed(4);
  const EnvConfig env;
  const auto snaps = case_study(fixed, env, LShapeParams::defaults(), {20, 40, 60, 80}, 1);
  REQUIRE(snaps.size() == 4);
  for (const auto& s : snaps) {
    CHECK(std::abs(s.total_power - 1.0) <= 1e-12);
    CHECK(s.users.size() == 3);
    CHECK(s.antennas.size() == 4);
    CHECK(s.power_alloc.size() == 12);
    for (std::size_t k = 0; k < 3; ++k) {
      double best = 0.0;
      for (std::size_t n = 0; n < 4; ++n) best = std::max(best, s.power_alloc[n * 3 + k]);
      CHECK(best > 0.0);
    }
  }
  CHECK(snaps[1].users[0] == lshape_corner(LShapeParams::defaults(), 0));
  CHECK_THROWS_AS(case_study(fixed, env, LShapeParams::defaults(), {0}, 1), std::out_of_range);

  const fs::path dir = fs::temp_directory_path() / "pass_eval_csv_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_case_study_csvs(snaps, 3, 4, dir.string());
  const EvalReport r = evaluate(baselines(), short_env(), {1}, 2);
  write_eval_csvs(r, dir.string());
  CHECK(slurp(dir / "eval_episodes.csv").rfind("method,seed,episode,sum_se\n", 0) == 0);
  CHECK(slurp(dir / "eval_summary.csv").rfind("method,mean,std,improvement_pct\n", 0) == 0);
  CHECK(slurp(dir / "cdf.csv").rfind("method,value,fraction\n", 0) == 0);
  const std::string cs = slurp(dir / "case_study.csv");
  CHECK(cs.rfind("step,entity_type,index,x,y\n", 0) == 0);
  CHECK(cs.find("20,user,0,") != std::string::npos);
  CHECK(cs.find("80,pa,3,") != std::string::npos);
  const std::string pw = slurp(dir / "power_alloc.csv");
  CHECK(pw.rfind("step,n,k,w_sq\n", 0) == 0);
  CHECK(std::count(pw.begin(), pw.end(), '\n') == 1 + 4 * 12);
  fs::remove_all(dir);
}
