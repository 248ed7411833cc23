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

#include "pass/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pass/config.hpp"
#include "pass/csv.hpp"
#include "pass/evaluation.hpp"
#include "pass/sac.hpp"

namespace pass {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> episodes;
  std::string run_dir;
  std::vector<std::string> checkpoints;
  std::vector<std::string> overrides;
};

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig resolve(const CommonArgs& a, const std::string& command) {
  std::vector<std::string> ov = a.overrides;
  if (a.seed) ov.push_back("run.seed=" + std::to_string(*a.seed));
  if (a.out) ov.push_back("run.out=" + *a.out);
  if (a.episodes) {
    ov.push_back((command == "train" ? "sac.episodes=" : "eval.episodes_per_seed=") +
                 std::to_string(*a.episodes));
  }
  return load_config(a.config_path, ov);
}

std::string open_run_dir(const CommonArgs& a, const RunConfig& cfg, const std::string& command) {
  try {
    if (!a.run_dir.empty()) {
      fs::create_directories(a.run_dir);
      return a.run_dir;
    }
    return make_run_dir(cfg.out_dir, command, cfg.seed);
  } catch (const fs::filesystem_error& e) {
    throw RuntimeFailure(std::string("cannot create output directory: ") + e.what());
  }
}

std::shared_ptr<const SacAgent> load_agent(const std::string& path, const EnvConfig& env) {
  if (!fs::exists(path)) throw RuntimeFailure("checkpoint not found: " + path);
  auto agent = std::make_shared<const SacAgent>(SacAgent::load_file(path));
  if (agent->state_dim() != env.observation_size() || agent->action_dim() != env.num_antennas())
    throw RuntimeFailure("checkpoint " + path + " does not match the configured system size");
  return agent;
}

void write_config_echo(const RunConfig& cfg, const std::string& dir) {
  write_file_atomic((fs::path(dir) / "config.ini").string(), config_to_text(cfg));
}

int cmd_train(const CommonArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a, "train");
  const std::string dir = open_run_dir(a, cfg, "train");
  write_config_echo(cfg, dir);
  const int report_every = std::max(1, cfg.sac.episodes / 20);
  TrainResult result = train(cfg.env, cfg.sac, cfg.seed, [&](const EpisodeRecord& r) {
    if ((r.episode + 1) % report_every == 0)
      out << "episode " << (r.episode + 1) << "/" << cfg.sac.episodes << " sum_se "
          << r.sum_se << " alpha " << r.alpha << std::endl;
  });
  std::ostringstream curve;
  write_training_curve_csv(curve, result.curve);
  write_file_atomic((fs::path(dir) / "training_curve.csv").string(), curve.str());
  result.agent.save_file((fs::path(dir) / "checkpoint_final.bin").string());
  if (result.best) result.best->save_file((fs::path(dir) / "checkpoint_best.bin").string());
  out << "constraint violations: " << result.constraints.total() << "\n";
  out << "run directory: " << dir << "\n";
  return result.constraints.total() == 0 ? kExitOk : kExitRuntime;
}

// One checkpoint for every seed, or one per seed in seed order.
std::vector<std::shared_ptr<const SacAgent>> load_agents(const CommonArgs& a,
                                                         const RunConfig& cfg) {
  std::vector<std::shared_ptr<const SacAgent>> agents;
  for (const auto& p : a.checkpoints) agents.push_back(load_agent(p, cfg.env));
  if (agents.size() > 1 && agents.size() != cfg.eval.seeds.size())
    throw ConfigError("--checkpoint given " + std::to_string(agents.size()) +
                      " times; expected 1 or one per eval seed (" +
                      std::to_string(cfg.eval.seeds.size()) + ")");
  return agents;
}

std::unique_ptr<Policy> make_sac_policy(const std::vector<std::shared_ptr<const SacAgent>>& agents,
                                        std::size_t seed_index) {
  return std::make_unique<SacPolicy>(agents.size() == 1 ? agents[0] : agents[seed_index]);
}

int cmd_eval(const CommonArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a, "eval");
  const bool wants_sac =
      std::find(cfg.eval.methods.begin(), cfg.eval.methods.end(), "sac") != cfg.eval.methods.end();
  if (wants_sac && a.checkpoints.empty())
    throw ConfigError("method 'sac' needs a trained agent: pass --checkpoint <file>");
  const auto agents = load_agents(a, cfg);
  const std::size_t n = cfg.env.num_antennas();
  std::vector<EvalMethod> methods;
  for (const auto& m : cfg.eval.methods) {
    if (m == "fixed")
      methods.push_back({m, [n](std::size_t) { return std::make_unique<FixedPolicy>(n); }});
    else if (m == "random")
      methods.push_back({m, [n](std::size_t) { return std::make_unique<RandomPolicy>(n); }});
    else
      methods.push_back({m, [&agents](std::size_t i) { return make_sac_policy(agents, i); }});
  }
  const std::string baseline =
      std::find(cfg.eval.methods.begin(), cfg.eval.methods.end(), "fixed") != cfg.eval.methods.end()
          ? "fixed"
          : cfg.eval.methods.front();
  const std::string dir = open_run_dir(a, cfg, "eval");
  write_config_echo(cfg, dir);
  const EvalReport report =
      evaluate(methods, cfg.env, cfg.eval.seeds, cfg.eval.episodes_per_seed, baseline, cfg.eval.jobs);
  write_eval_csvs(report, dir);
  ConstraintMonitor constraints = report.constraints;
  if (!agents.empty()) {
    SacPolicy policy(agents[0]);
    const auto snaps = case_study(policy, cfg.env, cfg.case_study.trajectory, cfg.case_study.steps,
                                  cfg.seed, &constraints);
    write_case_study_csvs(snaps, cfg.env.num_users, n, dir);
  }
  for (const auto& m : report.methods)
    out << m.name << ": mean " << m.mean << " std " << m.std << " improvement "
        << m.improvement_pct << "%\n";
  out << "constraint violations: " << constraints.total() << "\n";
  out << "run directory: " << dir << "\n";
  return constraints.total() == 0 ? kExitOk : kExitRuntime;
}

int cmd_case_study(const CommonArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a, "case-study");
  if (a.checkpoints.size() != 1) throw ConfigError("case-study needs exactly one --checkpoint");
  const auto agent = load_agent(a.checkpoints[0], cfg.env);
  const std::string dir = open_run_dir(a, cfg, "case-study");
  write_config_echo(cfg, dir);
  SacPolicy policy(agent);
  ConstraintMonitor constraints;
  const auto snaps = case_study(policy, cfg.env, cfg.case_study.trajectory, cfg.case_study.steps,
                                cfg.seed, &constraints);
  write_case_study_csvs(snaps, cfg.env.num_users, cfg.env.num_antennas(), dir);
  for (const auto& s : snaps) out << "step " << s.step << " total power " << s.total_power << "\n";
  out << "constraint violations: " << constraints.total() << "\n";
  out << "run directory: " << dir << "\n";
  return constraints.total() == 0 ? kExitOk : kExitRuntime;
}

void add_common(CLI::App* sub, CommonArgs& a, bool checkpoint) {
  sub->add_option("--config", a.config_path, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", a.seed, "master seed");
  sub->add_option("--out", a.out, "root directory for run artifacts");
  sub->add_option("--episodes", a.episodes,
                  "training episodes (train) or evaluation episodes per seed (eval)");
  sub->add_option("--run-dir", a.run_dir, "write artifacts to exactly this directory");
  if (checkpoint) sub->add_option("--checkpoint", a.checkpoints, "agent checkpoint file");
  sub->add_option("overrides", a.overrides, "dotted key=value overrides");
}

}  // namespace

std::string make_run_dir(const std::string& out_root, const std::string& command,
                         std::uint64_t seed) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const std::string base = command + "-" + stamp + "-seed" + std::to_string(seed);
  fs::create_directories(out_root);
  for (int i = 0;; ++i) {
    const fs::path p = fs::path(out_root) / (i == 0 ? base : base + "-" + std::to_string(i));
    if (fs::create_directory(p)) return p.string();
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinching-antenna placement with soft actor-critic", "passctl"};
  app.require_subcommand(1);
  CommonArgs train_args, eval_args, case_args;
  auto* train_cmd = app.add_subcommand("train", "train an agent");
  auto* eval_cmd = app.add_subcommand("eval", "evaluate fixed, random and trained policies");
  auto* case_cmd = app.add_subcommand("case-study", "run the L-shape trajectory");
  add_common(train_cmd, train_args, false);
  add_common(eval_cmd, eval_args, true);
  add_common(case_cmd, case_args, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_args, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    return cmd_case_study(case_args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace pass
