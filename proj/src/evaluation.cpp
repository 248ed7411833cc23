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

#include "pass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pass/csv.hpp"

namespace pass {

std::vector<double> policy_random(std::size_t num_antennas, Rng& rng) {
  std::vector<double> a(num_antennas);
  for (double& v : a) v = uniform(rng, -1.0, 1.0);
  return a;
}

std::vector<double> policy_fixed(std::size_t num_antennas) {
  return std::vector<double>(num_antennas, 0.0);
}

SacPolicy::SacPolicy(std::shared_ptr<const SacAgent> agent) : agent_(std::move(agent)) {
  if (!agent_) throw std::invalid_argument("SacPolicy needs an agent");
}

std::vector<double> SacPolicy::act(const Observation& obs, Rng& rng) {
  if (obs.vec.size() != agent_->state_dim())
    throw std::invalid_argument("observation size does not match the agent checkpoint");
  return agent_->sample_action(obs.vec, rng, true).a;
}

const MethodResult& EvalReport::method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return m;
  throw std::out_of_range("no evaluation results for method '" + name + "'");
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empirical_cdf: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out[i] = {sorted[i], static_cast<double>(i + 1) / n};
  return out;
}

double cdf_at(std::span<const CdfPoint> cdf, double x) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x,
                             [](double v, const CdfPoint& p) { return v < p.value; });
  if (it == cdf.begin()) return 0.0;
  return std::prev(it)->fraction;
}

double improvement_pct(double mean, double baseline_mean) {
  return 100.0 * (mean - baseline_mean) / baseline_mean;
}

std::uint64_t eval_episode_seed(std::uint64_t seed, int episode) {
  return derive_seed(seed, "eval-episode", {static_cast<std::uint64_t>(episode)});
}

double run_episode(Environment& env, Policy& policy, std::uint64_t episode_seed, Rng& policy_rng,
                   std::vector<StepResult>* steps) {
  Observation obs = env.reset(episode_seed);
  double total = 0.0;
  bool done = false;
  while (!done) {
    StepResult r = env.step(policy.act(obs, policy_rng));
    total += r.sum_se;
    done = r.done;
    obs = r.obs;
    if (steps) steps->push_back(std::move(r));
  }
  return total;
}

namespace {

struct SeedRun {
  std::vector<double> episodes;
  ConstraintMonitor monitor;
};

SeedRun run_seed(const EvalMethod& method, const EnvConfig& env_config, std::uint64_t seed,
                 std::size_t seed_index, int episodes) {
  SeedRun out;
  Environment env(env_config);
  std::unique_ptr<Policy> policy = method.make(seed_index);
  for (int e = 0; e < episodes; ++e) {
    Rng policy_rng = make_stream(seed, "eval-policy", {static_cast<std::uint64_t>(e)});
    out.episodes.push_back(run_episode(env, *policy, eval_episode_seed(seed, e), policy_rng));
  }
  out.monitor = env.constraints();
  return out;
}

}  // namespace

EvalReport evaluate(const std::vector<EvalMethod>& methods, const EnvConfig& env_config,
                    const std::vector<std::uint64_t>& seeds, int episodes_per_seed,
                    const std::string& baseline, unsigned jobs) {
  if (seeds.empty()) throw std::invalid_argument("evaluate: at least one seed is required");
  if (episodes_per_seed <= 0) throw std::invalid_argument("evaluate: episodes_per_seed must be > 0");
  EvalReport report;
  report.seeds = seeds;
  report.episodes_per_seed = episodes_per_seed;
  report.baseline = baseline;

  const std::size_t tasks = methods.size() * seeds.size();
  std::vector<SeedRun> runs(tasks);
  auto task = [&](std::size_t i) {
    const std::size_t m = i / seeds.size();
    const std::size_t s = i % seeds.size();
    runs[i] = run_seed(methods[m], env_config, seeds[s], s, episodes_per_seed);
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) task(i);
  } else {
    for (std::size_t start = 0; start < tasks; start += jobs) {
      std::vector<std::future<void>> pending;
      for (std::size_t i = start; i < std::min<std::size_t>(tasks, start + jobs); ++i)
        pending.push_back(std::async(std::launch::async, task, i));
      for (auto& f : pending) f.get();
    }
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodResult res;
    res.name = methods[m].name;
    std::vector<double> all;
    std::vector<double> seed_means;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      SeedRun& run = runs[m * seeds.size() + s];
      report.constraints.merge(run.monitor);
      all.insert(all.end(), run.episodes.begin(), run.episodes.end());
      seed_means.push_back(std::accumulate(run.episodes.begin(), run.episodes.end(), 0.0) /
                           static_cast<double>(run.episodes.size()));
      res.per_seed.push_back(std::move(run.episodes));
    }
    res.mean = std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
    if (seed_means.size() > 1) {
      const double mu = std::accumulate(seed_means.begin(), seed_means.end(), 0.0) /
                        static_cast<double>(seed_means.size());
      double ss = 0.0;
      for (double v : seed_means) ss += (v - mu) * (v - mu);
      res.std = std::sqrt(ss / static_cast<double>(seed_means.size() - 1));
    }
    res.cdf = empirical_cdf(all);
    report.methods.push_back(std::move(res));
  }

  const auto base = std::find_if(report.methods.begin(), report.methods.end(),
                                 [&](const MethodResult& r) { return r.name == baseline; });
  if (base != report.methods.end()) {
    const double base_mean = base->mean;
    for (auto& r : report.methods) r.improvement_pct = improvement_pct(r.mean, base_mean);
  }
  return report;
}

std::vector<CaseSnapshot> case_study(Policy& policy, const EnvConfig& env_config,
                                     const LShapeParams& trajectory,
                                     const std::vector<int>& snapshot_steps, std::uint64_t seed,
                                     ConstraintMonitor* monitor) {
  for (int s : snapshot_steps)
    if (s < 1 || s > env_config.episode_length)
      throw std::out_of_range("case study snapshot step " + std::to_string(s) +
                              " outside the episode");
  Environment env(env_config);
  env.set_trajectory(trajectory);
  Rng policy_rng = make_stream(seed, "case-study-policy");
  std::vector<StepResult> steps;
  run_episode(env, policy, derive_seed(seed, "case-study"), policy_rng, &steps);
  if (monitor) monitor->merge(env.constraints());

  std::vector<CaseSnapshot> out;
  for (int s : snapshot_steps) {
    const StepRecord& rec = steps.at(static_cast<std::size_t>(s - 1)).record;
    CaseSnapshot snap;
    snap.step = rec.t;
    snap.users = rec.user_positions;
    for (std::size_t n = 0; n < rec.pa_positions.size(); ++n)
      snap.antennas.push_back({rec.pa_positions[n], env_config.waveguide_y[n]});
    snap.los = rec.los;
    snap.power_alloc = rec.power_alloc;
    snap.total_power = std::accumulate(rec.power_alloc.begin(), rec.power_alloc.end(), 0.0);
    out.push_back(std::move(snap));
  }
  return out;
}

void write_eval_csvs(const EvalReport& report, const std::string& dir) {
  std::ostringstream episodes, summary, cdf;
  episodes << "method,seed,episode,sum_se\n";
  summary << "method,mean,std,improvement_pct\n";
  cdf << "method,value,fraction\n";
  for (const auto& m : report.methods) {
    for (std::size_t s = 0; s < m.per_seed.size(); ++s)
      for (std::size_t e = 0; e < m.per_seed[s].size(); ++e)
        episodes << m.name << ',' << report.seeds[s] << ',' << e << ','
                 << format_double(m.per_seed[s][e]) << '\n';
    summary << m.name << ',' << format_double(m.mean) << ',' << format_double(m.std) << ','
            << format_double(m.improvement_pct) << '\n';
    for (const auto& p : m.cdf)
      cdf << m.name << ',' << format_double(p.value) << ',' << format_double(p.fraction) << '\n';
  }
  write_file_atomic(dir + "/eval_episodes.csv", episodes.str());
  write_file_atomic(dir + "/eval_summary.csv", summary.str());
  write_file_atomic(dir + "/cdf.csv", cdf.str());
}

void write_case_study_csvs(const std::vector<CaseSnapshot>& snaps, std::size_t num_users,
                           std::size_t num_antennas, const std::string& dir) {
  std::ostringstream pos, power;
  pos << "step,entity_type,index,x,y\n";
  power << "step,n,k,w_sq\n";
  for (const auto& s : snaps) {
    for (std::size_t k = 0; k < s.users.size(); ++k)
      pos << s.step << ",user," << k << ',' << format_double(s.users[k].x) << ','
          << format_double(s.users[k].y) << '\n';
    for (std::size_t n = 0; n < s.antennas.size(); ++n)
      pos << s.step << ",pa," << n << ',' << format_double(s.antennas[n].x) << ','
          << format_double(s.antennas[n].y) << '\n';
    for (std::size_t n = 0; n < num_antennas; ++n)
      for (std::size_t k = 0; k < num_users; ++k)
        power << s.step << ',' << n << ',' << k << ','
              << format_double(s.power_alloc[n * num_users + k]) << '\n';
  }
  write_file_atomic(dir + "/case_study.csv", pos.str());
  write_file_atomic(dir + "/power_alloc.csv", power.str());
}

}  // namespace pass
