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

#include "pass/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "pass/csv.hpp"

namespace pass {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const char* expected, const std::string& v) {
  throw ConfigError("key '" + key + "': expected " + expected + ", got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    bad_value(key, "a number", v);
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long out = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    bad_value(key, "an integer", v);
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < 0) bad_value(key, "a non-negative integer", v);
  return static_cast<std::uint64_t>(x);
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& p : split_list(v)) out.push_back(to_double(key, p));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(v[i]);
  return s;
}

std::string dbl(double v) { return format_double(v); }
std::string dbls(const std::vector<double>& v) {
  return join<double>(v, [](const double& d) { return format_double(d); });
}
template <typename T>
std::string ints(const std::vector<T>& v) {
  return join<T>(v, [](const T& d) { return std::to_string(d); });
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define PASS_DOUBLE_KEY(NAME, FIELD)                                                          \
  Key {                                                                                       \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = to_double(NAME, v); },           \
        [](const RunConfig& c) { return dbl(c.FIELD); }                                       \
  }
#define PASS_INT_KEY(NAME, FIELD, TYPE)                                                       \
  Key {                                                                                       \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = static_cast<TYPE>(to_int(NAME, v)); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                            \
  }
#define PASS_UINT_KEY(NAME, FIELD, TYPE)                                                      \
  Key {                                                                                       \
    NAME, [](RunConfig& c, const std::string& v) { c.FIELD = static_cast<TYPE>(to_uint(NAME, v)); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                            \
  }

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      PASS_UINT_KEY("system.num_users", env.num_users, std::size_t),
      Key{"system.waveguide_y",
          [](RunConfig& c, const std::string& v) {
            c.env.waveguide_y = to_doubles("system.waveguide_y", v);
          },
          [](const RunConfig& c) { return dbls(c.env.waveguide_y); }},
      PASS_DOUBLE_KEY("system.area_side", env.area_side),
      PASS_DOUBLE_KEY("system.pa_height", env.channel.pa_height),
      PASS_DOUBLE_KEY("system.carrier_freq", env.channel.carrier_freq),
      PASS_DOUBLE_KEY("system.max_slide", env.max_slide),
      PASS_DOUBLE_KEY("system.move_weight", env.move_weight),
      PASS_DOUBLE_KEY("system.p_max", env.p_max),
      PASS_DOUBLE_KEY("system.effective_index", env.effective_index),
      PASS_INT_KEY("system.episode_length", env.episode_length, int),
      PASS_DOUBLE_KEY("env.gain_db_min", env.gain_db_min),
      PASS_DOUBLE_KEY("env.gain_db_max", env.gain_db_max),
      PASS_DOUBLE_KEY("mobility.alpha", env.mobility.alpha),
      Key{"mobility.mean_velocity",
          [](RunConfig& c, const std::string& v) {
            const auto xs = to_doubles("mobility.mean_velocity", v);
            if (xs.size() != 2) bad_value("mobility.mean_velocity", "two numbers", v);
            c.env.mobility.mean_velocity = {xs[0], xs[1]};
          },
          [](const RunConfig& c) {
            return dbls({c.env.mobility.mean_velocity.x, c.env.mobility.mean_velocity.y});
          }},
      PASS_DOUBLE_KEY("mobility.noise_std", env.mobility.noise_std),
      PASS_DOUBLE_KEY("mobility.dt", env.mobility.dt),
      PASS_DOUBLE_KEY("mobility.v_max", env.mobility.v_max),
      PASS_DOUBLE_KEY("channel.user_height", env.channel.user_height),
      PASS_DOUBLE_KEY("channel.eta_los", env.channel.eta_los),
      PASS_DOUBLE_KEY("channel.eta_nlos", env.channel.eta_nlos),
      Key{"channel.ref_gain",
          [](RunConfig& c, const std::string& v) {
            if (trim(v) == "auto") {
              c.ref_gain_override.reset();
            } else {
              c.ref_gain_override = to_double("channel.ref_gain", v);
            }
          },
          [](const RunConfig& c) {
            return c.ref_gain_override ? dbl(*c.ref_gain_override) : std::string("auto");
          }},
      PASS_DOUBLE_KEY("channel.blockage_persistence", env.channel.blockage_persistence),
      PASS_DOUBLE_KEY("channel.noise_power", env.channel.noise_power),
      Key{"sac.hidden",
          [](RunConfig& c, const std::string& v) {
            c.sac.hidden.clear();
            for (const auto& p : split_list(v))
              c.sac.hidden.push_back(static_cast<std::size_t>(to_uint("sac.hidden", p)));
          },
          [](const RunConfig& c) { return ints(c.sac.hidden); }},
      PASS_DOUBLE_KEY("sac.gamma", sac.gamma),
      PASS_DOUBLE_KEY("sac.tau", sac.tau),
      PASS_DOUBLE_KEY("sac.actor_lr", sac.actor_lr),
      PASS_DOUBLE_KEY("sac.critic_lr", sac.critic_lr),
      PASS_DOUBLE_KEY("sac.alpha_lr", sac.alpha_lr),
      PASS_DOUBLE_KEY("sac.initial_alpha", sac.initial_alpha),
      Key{"sac.target_entropy",
          [](RunConfig& c, const std::string& v) {
            if (trim(v) == "auto") {
              c.sac.target_entropy.reset();
            } else {
              c.sac.target_entropy = to_double("sac.target_entropy", v);
            }
          },
          [](const RunConfig& c) {
            return c.sac.target_entropy ? dbl(*c.sac.target_entropy) : std::string("auto");
          }},
      PASS_UINT_KEY("sac.buffer_capacity", sac.buffer_capacity, std::size_t),
      PASS_UINT_KEY("sac.batch_size", sac.batch_size, std::size_t),
      PASS_UINT_KEY("sac.warmup_steps", sac.warmup_steps, std::size_t),
      PASS_UINT_KEY("sac.updates_per_step", sac.updates_per_step, std::size_t),
      PASS_INT_KEY("sac.episodes", sac.episodes, int),
      PASS_INT_KEY("sac.validation_interval", sac.validation_interval, int),
      PASS_INT_KEY("sac.validation_episodes", sac.validation_episodes, int),
      PASS_DOUBLE_KEY("sac.log_std_min", sac.log_std_min),
      PASS_DOUBLE_KEY("sac.log_std_max", sac.log_std_max),
      Key{"eval.seeds",
          [](RunConfig& c, const std::string& v) {
            c.eval.seeds.clear();
            for (const auto& p : split_list(v)) c.eval.seeds.push_back(to_uint("eval.seeds", p));
          },
          [](const RunConfig& c) { return ints(c.eval.seeds); }},
      PASS_INT_KEY("eval.episodes_per_seed", eval.episodes_per_seed, int),
      Key{"eval.methods",
          [](RunConfig& c, const std::string& v) {
            c.eval.methods = split_list(v);
            for (const auto& m : c.eval.methods)
              if (m != "fixed" && m != "random" && m != "sac")
                bad_value("eval.methods", "a list of fixed, random, sac", v);
          },
          [](const RunConfig& c) {
            return join<std::string>(c.eval.methods, [](const std::string& s) { return s; });
          }},
      PASS_UINT_KEY("eval.jobs", eval.jobs, unsigned),
      Key{"case_study.steps",
          [](RunConfig& c, const std::string& v) {
            c.case_study.steps.clear();
            for (const auto& p : split_list(v))
              c.case_study.steps.push_back(static_cast<int>(to_int("case_study.steps", p)));
          },
          [](const RunConfig& c) { return ints(c.case_study.steps); }},
      PASS_DOUBLE_KEY("case_study.speed", case_study.trajectory.speed),
      Key{"case_study.starts",
          [](RunConfig& c, const std::string& v) {
            const auto xs = to_doubles("case_study.starts", v);
            if (xs.size() % 2 != 0) bad_value("case_study.starts", "x,y pairs", v);
            auto& users = c.case_study.trajectory.users;
            users.resize(xs.size() / 2);
            for (std::size_t k = 0; k < users.size(); ++k) users[k].start = {xs[2 * k], xs[2 * k + 1]};
          },
          [](const RunConfig& c) {
            std::vector<double> xs;
            for (const auto& u : c.case_study.trajectory.users) {
              xs.push_back(u.start.x);
              xs.push_back(u.start.y);
            }
            return dbls(xs);
          }},
      Key{"case_study.leg_x",
          [](RunConfig& c, const std::string& v) {
            const auto xs = to_doubles("case_study.leg_x", v);
            auto& users = c.case_study.trajectory.users;
            if (xs.size() != users.size()) bad_value("case_study.leg_x", "one value per user", v);
            for (std::size_t k = 0; k < users.size(); ++k) users[k].leg_x = xs[k];
          },
          [](const RunConfig& c) {
            std::vector<double> xs;
            for (const auto& u : c.case_study.trajectory.users) xs.push_back(u.leg_x);
            return dbls(xs);
          }},
      Key{"case_study.leg_y",
          [](RunConfig& c, const std::string& v) {
            const auto xs = to_doubles("case_study.leg_y", v);
            auto& users = c.case_study.trajectory.users;
            if (xs.size() != users.size()) bad_value("case_study.leg_y", "one value per user", v);
            for (std::size_t k = 0; k < users.size(); ++k) users[k].leg_y = xs[k];
          },
          [](const RunConfig& c) {
            std::vector<double> xs;
            for (const auto& u : c.case_study.trajectory.users) xs.push_back(u.leg_y);
            return dbls(xs);
          }},
      PASS_UINT_KEY("run.seed", seed, std::uint64_t),
      Key{"run.out", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); },
          [](const RunConfig& c) { return c.out_dir; }},
  };
  return keys;
}

#undef PASS_DOUBLE_KEY
#undef PASS_INT_KEY
#undef PASS_UINT_KEY

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  finalize_config(cfg);
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(k.name);
  return out;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : key_table())
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  throw ConfigError("unknown key '" + key + "'");
}

void finalize_config(RunConfig& cfg) {
  EnvConfig& env = cfg.env;
  if (!(env.channel.carrier_freq > 0.0))
    throw ConfigError("key 'system.carrier_freq': must be > 0");
  env.channel.derive_from_carrier();
  if (cfg.ref_gain_override) env.channel.ref_gain = *cfg.ref_gain_override;
  env.mobility.area_side = env.area_side;
  cfg.case_study.trajectory.dt = env.mobility.dt;
  cfg.case_study.trajectory.episode_length = env.episode_length;
  if (env.num_users > env.num_antennas())
    throw ConfigError("key 'system.num_users': N must be >= K (N = " +
                      std::to_string(env.num_antennas()) + ", K = " +
                      std::to_string(env.num_users) + ")");
  try {
    env.validate();
    cfg.sac.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.eval.seeds.empty()) throw ConfigError("key 'eval.seeds': at least one seed required");
  if (cfg.eval.episodes_per_seed <= 0)
    throw ConfigError("key 'eval.episodes_per_seed': must be > 0");
  if (cfg.case_study.trajectory.users.size() != env.num_users)
    throw ConfigError("key 'case_study.starts': one start point per user required");
  for (int s : cfg.case_study.steps)
    if (s < 1 || s > env.episode_length)
      throw ConfigError("key 'case_study.steps': step " + std::to_string(s) +
                        " outside the episode");
  if (!(cfg.case_study.trajectory.speed >= 0.0 &&
        cfg.case_study.trajectory.speed <= env.mobility.v_max))
    throw ConfigError("key 'case_study.speed': must lie in [0, mobility.v_max]");
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    for (const auto& [k, v] : parse_config_text(buf.str(), path)) apply_override(cfg, k, v);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    apply_override(cfg, trim(o.substr(0, eq)), o.substr(eq + 1));
  }
  finalize_config(cfg);
  return cfg;
}

std::string config_to_text(const RunConfig& cfg) {
  std::string out = "# resolved configuration\n";
  for (const auto& k : key_table()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace pass
