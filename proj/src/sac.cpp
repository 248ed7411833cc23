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

#include "pass/sac.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pass/csv.hpp"

namespace pass {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kJacobianEps = 1e-6;
const double kTanhEdge = std::nextafter(1.0, 0.0);

double squash(double u) { return std::clamp(std::tanh(u), -kTanhEdge, kTanhEdge); }
}  // namespace

void SacConfig::validate() const {
  if (hidden.empty()) throw std::invalid_argument("sac.hidden must list at least one layer");
  for (std::size_t h : hidden)
    if (h == 0) throw std::invalid_argument("sac.hidden sizes must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("sac.gamma must lie in [0, 1)");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("sac.tau must lie in [0, 1]");
  if (!(actor_lr > 0.0 && critic_lr > 0.0 && alpha_lr > 0.0))
    throw std::invalid_argument("sac learning rates must be > 0");
  if (!(initial_alpha > 0.0)) throw std::invalid_argument("sac.initial_alpha must be > 0");
  if (batch_size == 0) throw std::invalid_argument("sac.batch_size must be > 0");
  if (buffer_capacity < batch_size)
    throw std::invalid_argument("sac.buffer_capacity must be >= sac.batch_size");
  if (episodes < 0) throw std::invalid_argument("sac.episodes must be >= 0");
  if (!(log_std_min < log_std_max))
    throw std::invalid_argument("sac.log_std_min must be < sac.log_std_max");
}

// ---------------------------------------------------------------------------
// Replay buffer

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim)
    : capacity_(capacity),
      sdim_(state_dim),
      adim_(action_dim),
      s_(capacity * state_dim),
      a_(capacity * action_dim),
      r_(capacity),
      s2_(capacity * state_dim),
      d_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be > 0");
}

void ReplayBuffer::push(const Transition& t) {
  if (t.s.size() != sdim_ || t.s_next.size() != sdim_ || t.a.size() != adim_)
    throw std::invalid_argument("transition has wrong dimensions");
  if (!std::isfinite(t.r)) throw std::invalid_argument("transition reward is not finite");
  std::copy(t.s.begin(), t.s.end(), s_.begin() + cursor_ * sdim_);
  std::copy(t.a.begin(), t.a.end(), a_.begin() + cursor_ * adim_);
  std::copy(t.s_next.begin(), t.s_next.end(), s2_.begin() + cursor_ * sdim_);
  r_[cursor_] = t.r;
  d_[cursor_] = t.done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("replay buffer index");
  const std::size_t start = size_ < capacity_ ? 0 : cursor_;
  const std::size_t slot = (start + i) % capacity_;
  Transition t;
  t.s.assign(s_.begin() + slot * sdim_, s_.begin() + (slot + 1) * sdim_);
  t.a.assign(a_.begin() + slot * adim_, a_.begin() + (slot + 1) * adim_);
  t.s_next.assign(s2_.begin() + slot * sdim_, s2_.begin() + (slot + 1) * sdim_);
  t.r = r_[slot];
  t.done = d_[slot] != 0.0;
  return t;
}

TransitionBatch ReplayBuffer::gather(std::span<const std::size_t> slots) const {
  TransitionBatch b;
  const std::size_t n = slots.size();
  b.s = Matrix(n, sdim_);
  b.a = Matrix(n, adim_);
  b.s_next = Matrix(n, sdim_);
  b.r.resize(n);
  b.done.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t slot = slots[i];
    if (slot >= size_) throw std::out_of_range("replay buffer slot");
    std::copy_n(s_.begin() + slot * sdim_, sdim_, b.s.data() + i * sdim_);
    std::copy_n(a_.begin() + slot * adim_, adim_, b.a.data() + i * adim_);
    std::copy_n(s2_.begin() + slot * sdim_, sdim_, b.s_next.data() + i * sdim_);
    b.r[i] = r_[slot];
    b.done[i] = d_[slot];
  }
  return b;
}

TransitionBatch ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  if (size_ < batch)
    throw std::logic_error("replay buffer holds fewer transitions than the batch size");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> slots(batch);
  for (auto& s : slots) s = pick(rng);
  return gather(slots);
}

// ---------------------------------------------------------------------------
// Agent

double squashed_gaussian_log_prob(std::span<const double> u, std::span<const double> mu,
                                  std::span<const double> log_std) {
  if (u.size() != mu.size() || u.size() != log_std.size())
    throw std::invalid_argument("squashed_gaussian_log_prob: length mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double z = (u[i] - mu[i]) / std::exp(log_std[i]);
    const double a = squash(u[i]);
    lp += -0.5 * z * z - log_std[i] - kHalfLog2Pi - std::log(1.0 - a * a + kJacobianEps);
  }
  return lp;
}

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden,
                                     std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

double soft_td_value(double r, double done, double gamma, double q1, double q2, double alpha,
                     double log_prob) {
  return r + gamma * (1.0 - done) * (std::min(q1, q2) - alpha * log_prob);
}

SacAgent::SacAgent(std::size_t state_dim, std::size_t action_dim, SacConfig config,
                   std::uint64_t seed)
    : sdim_(state_dim), adim_(action_dim), config_(std::move(config)) {
  config_.validate();
  if (sdim_ == 0 || adim_ == 0) throw std::invalid_argument("agent dimensions must be positive");
  target_entropy_ = config_.target_entropy.value_or(-static_cast<double>(adim_));
  Rng init = make_stream(seed, "network-init");
  actor_ = Mlp::create(layer_sizes(sdim_, config_.hidden, 2 * adim_), init);
  q1_ = Mlp::create(layer_sizes(sdim_ + adim_, config_.hidden, 1), init);
  q2_ = Mlp::create(layer_sizes(sdim_ + adim_, config_.hidden, 1), init);
  q1_target_ = q1_;
  q2_target_ = q2_;
  actor_opt_ = AdamState(actor_.num_params(), config_.actor_lr);
  q1_opt_ = AdamState(q1_.num_params(), config_.critic_lr);
  q2_opt_ = AdamState(q2_.num_params(), config_.critic_lr);
  alpha_opt_ = AdamState(1, config_.alpha_lr);
  log_alpha_ = std::log(config_.initial_alpha);
}

double SacAgent::alpha() const { return std::exp(log_alpha_); }

void SacAgent::set_kernels(const kernels::KernelTable& table) {
  for (Mlp* m : {&actor_, &q1_, &q2_, &q1_target_, &q2_target_}) m->set_kernels(table);
}

SacAgent::PolicyPass SacAgent::policy(const Matrix& s, Rng& rng, bool with_cache) const {
  PolicyPass p;
  const Matrix out = actor_.forward(s, with_cache ? &p.cache : nullptr);
  const std::size_t batch = s.rows();
  p.mu = Matrix(batch, adim_);
  p.raw_log_std = Matrix(batch, adim_);
  p.log_std = Matrix(batch, adim_);
  p.eps = Matrix(batch, adim_);
  p.a = Matrix(batch, adim_);
  p.log_prob.assign(batch, 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    double lp = 0.0;
    for (std::size_t i = 0; i < adim_; ++i) {
      const double mu = out(b, i);
      const double raw = out(b, adim_ + i);
      const double ls = std::clamp(raw, config_.log_std_min, config_.log_std_max);
      const double eps = standard_normal(rng);
      const double a = squash(mu + std::exp(ls) * eps);
      p.mu(b, i) = mu;
      p.raw_log_std(b, i) = raw;
      p.log_std(b, i) = ls;
      p.eps(b, i) = eps;
      p.a(b, i) = a;
      lp += -0.5 * eps * eps - ls - kHalfLog2Pi - std::log(1.0 - a * a + kJacobianEps);
    }
    p.log_prob[b] = lp;
  }
  return p;
}

ActionSample SacAgent::sample_action(std::span<const double> s, Rng& rng,
                                     bool deterministic) const {
  if (s.size() != sdim_) throw std::invalid_argument("sample_action: state has wrong length");
  ActionSample out;
  if (deterministic) {
    const std::vector<double> raw = actor_.forward(s);
    out.a.resize(adim_);
    for (std::size_t i = 0; i < adim_; ++i) {
      if (!std::isfinite(raw[i])) throw std::runtime_error("actor produced a non-finite output");
      out.a[i] = squash(raw[i]);
    }
    return out;
  }
  Matrix in(1, sdim_);
  std::copy(s.begin(), s.end(), in.data());
  const PolicyPass p = policy(in, rng, false);
  for (std::size_t i = 0; i < adim_; ++i)
    if (!std::isfinite(p.mu(0, i)) || !std::isfinite(p.raw_log_std(0, i)))
      throw std::runtime_error("actor produced a non-finite output");
  out.a.assign(p.a.data(), p.a.data() + adim_);
  out.log_prob = p.log_prob[0];
  return out;
}

Matrix SacAgent::critic_input(const Matrix& s, const Matrix& a) const {
  Matrix x(s.rows(), sdim_ + adim_);
  for (std::size_t b = 0; b < s.rows(); ++b) {
    std::copy_n(s.data() + b * sdim_, sdim_, x.data() + b * (sdim_ + adim_));
    std::copy_n(a.data() + b * adim_, adim_, x.data() + b * (sdim_ + adim_) + sdim_);
  }
  return x;
}

std::vector<double> SacAgent::td_target(const TransitionBatch& batch, Rng& rng) const {
  const PolicyPass next = policy(batch.s_next, rng, false);
  const Matrix x = critic_input(batch.s_next, next.a);
  const Matrix t1 = q1_target_.forward(x);
  const Matrix t2 = q2_target_.forward(x);
  const double alpha = this->alpha();
  std::vector<double> y(batch.r.size());
  for (std::size_t b = 0; b < y.size(); ++b)
    y[b] = soft_td_value(batch.r[b], batch.done[b], config_.gamma, t1(b, 0), t2(b, 0), alpha,
                         next.log_prob[b]);
  return y;
}

UpdateStats SacAgent::update(const ReplayBuffer& buffer, Rng& rng) {
  if (buffer.size() < config_.batch_size)
    throw std::logic_error("replay buffer holds fewer transitions than the batch size");
  return update_on(buffer.sample(config_.batch_size, rng), rng);
}

UpdateStats SacAgent::update_on(const TransitionBatch& batch, Rng& rng) {
  const std::size_t n = batch.r.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  UpdateStats stats;

  // Critics regress onto the soft TD target.
  const std::vector<double> y = td_target(batch, rng);
  const Matrix x = critic_input(batch.s, batch.a);
  std::vector<double> grads;
  for (auto [net, opt] : {std::pair{&q1_, &q1_opt_}, std::pair{&q2_, &q2_opt_}}) {
    MlpCache cache;
    const Matrix q = net->forward(x, &cache);
    Matrix dy(n, 1);
    double loss = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double err = q(b, 0) - y[b];
      loss += err * err * inv_n;
      dy(b, 0) = 2.0 * err * inv_n;
    }
    grads.assign(net->num_params(), 0.0);
    net->backward(cache, dy, grads, nullptr);
    adam_step(net->params(), grads, *opt, net->kernels());
    net->touch();
    stats.critic_loss += loss;
  }

  // Actor maximizes min-Q minus the entropy penalty through the
  // reparameterized sample.
  const double alpha = this->alpha();
  PolicyPass p = policy(batch.s, rng, true);
  const Matrix xa = critic_input(batch.s, p.a);
  MlpCache c1, c2;
  const Matrix q1v = q1_.forward(xa, &c1);
  const Matrix q2v = q2_.forward(xa, &c2);
  Matrix dy1(n, 1), dy2(n, 1);
  double actor_loss = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const bool first = q1v(b, 0) <= q2v(b, 0);
    const double qmin = first ? q1v(b, 0) : q2v(b, 0);
    actor_loss += (alpha * p.log_prob[b] - qmin) * inv_n;
    (first ? dy1 : dy2)(b, 0) = -inv_n;
  }
  Matrix dx1, dx2;
  q1_.backward(c1, dy1, {}, &dx1);
  q2_.backward(c2, dy2, {}, &dx2);

  Matrix dout(n, 2 * adim_);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < adim_; ++i) {
      const double a = p.a(b, i);
      const double one_m_a2 = 1.0 - a * a;
      const double dq_da = dx1(b, sdim_ + i) + dx2(b, sdim_ + i);
      const double dlogp_du = 2.0 * a * one_m_a2 / (one_m_a2 + kJacobianEps);
      const double dl_du = dq_da * one_m_a2 + alpha * inv_n * dlogp_du;
      const double sigma = std::exp(p.log_std(b, i));
      dout(b, i) = dl_du;
      const double raw = p.raw_log_std(b, i);
      const bool clamped = raw < config_.log_std_min || raw > config_.log_std_max;
      dout(b, adim_ + i) = clamped ? 0.0 : dl_du * sigma * p.eps(b, i) - alpha * inv_n;
    }
  }
  grads.assign(actor_.num_params(), 0.0);
  actor_.backward(p.cache, dout, grads, nullptr);
  adam_step(actor_.params(), grads, actor_opt_, actor_.kernels());
  actor_.touch();
  stats.actor_loss = actor_loss;

  // Temperature.
  double mean_term = 0.0;
  for (double lp : p.log_prob) mean_term += (lp + target_entropy_) * inv_n;
  stats.alpha_loss = -alpha * mean_term;
  double alpha_param[1] = {log_alpha_};
  const double alpha_grad[1] = {-alpha * mean_term};
  adam_step(alpha_param, alpha_grad, alpha_opt_, kernels::scalar_kernels());
  log_alpha_ = alpha_param[0];

  polyak_update(q1_target_, q1_, config_.tau);
  polyak_update(q2_target_, q2_, config_.tau);

  ++updates_;
  stats.alpha = this->alpha();
  return stats;
}

// ---------------------------------------------------------------------------
// Checkpoint

namespace {

constexpr char kAgentMagic[8] = {'P', 'A', 'S', 'S', 'S', 'A', 'C', '\0'};
constexpr std::uint32_t kAgentVersion = 1;

void write_string(std::ostream& out, const std::string& s) {
  io::write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const std::uint64_t n = io::read_u64(in);
  if (n > (1u << 16)) throw std::runtime_error("corrupt agent checkpoint (string length)");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("agent checkpoint truncated");
  return s;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::size_t> split_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoul(part));
  return out;
}

double parse_double(const std::map<std::string, std::string>& meta, const std::string& key) {
  auto it = meta.find(key);
  if (it == meta.end()) throw std::runtime_error("agent checkpoint missing metadata '" + key + "'");
  return std::strtod(it->second.c_str(), nullptr);
}

}  // namespace

void SacAgent::save(std::ostream& out) const {
  out.write(kAgentMagic, sizeof(kAgentMagic));
  io::write_u32(out, kAgentVersion);
  const std::vector<std::pair<std::string, std::string>> meta{
      {"hidden", join_sizes(config_.hidden)},
      {"gamma", format_double(config_.gamma)},
      {"tau", format_double(config_.tau)},
      {"actor_lr", format_double(config_.actor_lr)},
      {"critic_lr", format_double(config_.critic_lr)},
      {"alpha_lr", format_double(config_.alpha_lr)},
      {"initial_alpha", format_double(config_.initial_alpha)},
      {"target_entropy", format_double(target_entropy_)},
      {"buffer_capacity", std::to_string(config_.buffer_capacity)},
      {"batch_size", std::to_string(config_.batch_size)},
      {"warmup_steps", std::to_string(config_.warmup_steps)},
      {"log_std_min", format_double(config_.log_std_min)},
      {"log_std_max", format_double(config_.log_std_max)},
  };
  io::write_u64(out, meta.size());
  for (const auto& [k, v] : meta) {
    write_string(out, k);
    write_string(out, v);
  }
  io::write_u64(out, sdim_);
  io::write_u64(out, adim_);
  io::write_f64(out, log_alpha_);
  io::write_u64(out, updates_);
  io::write_u64(out, env_steps_);
  for (const Mlp* m : {&actor_, &q1_, &q2_, &q1_target_, &q2_target_}) write_mlp(out, *m);
  if (!out) throw std::runtime_error("failed writing agent checkpoint");
}

SacAgent SacAgent::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kAgentMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not an agent checkpoint (bad magic)");
  const std::uint32_t version = io::read_u32(in);
  if (version != kAgentVersion)
    throw std::runtime_error("unsupported agent checkpoint version " + std::to_string(version));
  const std::uint64_t count = io::read_u64(in);
  if (count > 256) throw std::runtime_error("corrupt agent checkpoint (metadata count)");
  std::map<std::string, std::string> meta;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string k = read_string(in);
    meta[k] = read_string(in);
  }
  SacConfig cfg;
  auto hidden = meta.find("hidden");
  if (hidden == meta.end()) throw std::runtime_error("agent checkpoint missing metadata 'hidden'");
  cfg.hidden = split_sizes(hidden->second);
  cfg.gamma = parse_double(meta, "gamma");
  cfg.tau = parse_double(meta, "tau");
  cfg.actor_lr = parse_double(meta, "actor_lr");
  cfg.critic_lr = parse_double(meta, "critic_lr");
  cfg.alpha_lr = parse_double(meta, "alpha_lr");
  cfg.initial_alpha = parse_double(meta, "initial_alpha");
  cfg.target_entropy = parse_double(meta, "target_entropy");
  cfg.buffer_capacity = static_cast<std::size_t>(parse_double(meta, "buffer_capacity"));
  cfg.batch_size = static_cast<std::size_t>(parse_double(meta, "batch_size"));
  cfg.warmup_steps = static_cast<std::size_t>(parse_double(meta, "warmup_steps"));
  cfg.log_std_min = parse_double(meta, "log_std_min");
  cfg.log_std_max = parse_double(meta, "log_std_max");

  const std::uint64_t sdim = io::read_u64(in);
  const std::uint64_t adim = io::read_u64(in);
  if (sdim == 0 || adim == 0 || sdim > 4096 || adim > 4096)
    throw std::runtime_error("corrupt agent checkpoint (dimensions)");
  SacAgent agent(sdim, adim, cfg, 0);
  agent.log_alpha_ = io::read_f64(in);
  agent.updates_ = io::read_u64(in);
  agent.env_steps_ = io::read_u64(in);
  for (Mlp* m : {&agent.actor_, &agent.q1_, &agent.q2_, &agent.q1_target_, &agent.q2_target_}) {
    Mlp loaded = read_mlp(in);
    if (loaded.sizes() != m->sizes())
      throw std::runtime_error("agent checkpoint network shape does not match its metadata");
    *m = std::move(loaded);
  }
  return agent;
}

void SacAgent::save_file(const std::string& path) const {
  std::ostringstream buf(std::ios::binary);
  save(buf);
  write_file_atomic(path, buf.str());
}

SacAgent SacAgent::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  return load(in);
}

// ---------------------------------------------------------------------------
// Training

std::uint64_t train_episode_seed(std::uint64_t seed, int episode) {
  return derive_seed(seed, "train-episode", {static_cast<std::uint64_t>(episode)});
}

std::uint64_t validation_episode_seed(std::uint64_t seed, int index) {
  return derive_seed(seed, "validation-episode", {static_cast<std::uint64_t>(index)});
}

namespace {

double validate_agent(const SacAgent& agent, const EnvConfig& env_config, std::uint64_t seed,
                      int episodes, ConstraintMonitor& monitor) {
  Environment env(env_config);
  Rng unused(0);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Observation obs = env.reset(validation_episode_seed(seed, e));
    bool done = false;
    while (!done) {
      const ActionSample act = agent.sample_action(obs.vec, unused, true);
      StepResult r = env.step(act.a);
      total += r.sum_se;
      done = r.done;
      obs = std::move(r.obs);
    }
  }
  monitor.merge(env.constraints());
  return total / std::max(episodes, 1);
}

}  // namespace

TrainResult train(const EnvConfig& env_config, const SacConfig& sac_config, std::uint64_t seed,
                  const EpisodeCallback& on_episode) {
  Environment env(env_config);
  const std::size_t sdim = env_config.observation_size();
  const std::size_t adim = env_config.num_antennas();
  TrainResult result{SacAgent(sdim, adim, sac_config, seed), std::nullopt, 0.0, {}, {}};
  SacAgent& agent = result.agent;
  ReplayBuffer buffer(sac_config.buffer_capacity, sdim, adim);
  Rng explore = make_stream(seed, "exploration");
  Rng replay = make_stream(seed, "replay");
  std::uint64_t steps = 0;
  double best = -std::numeric_limits<double>::infinity();

  for (int ep = 0; ep < sac_config.episodes; ++ep) {
    Observation obs = env.reset(train_episode_seed(seed, ep));
    EpisodeRecord rec;
    rec.episode = ep;
    double reward_sum = 0.0;
    int updates = 0;
    bool done = false;
    while (!done) {
      std::vector<double> action(adim);
      if (steps < sac_config.warmup_steps) {
        for (double& a : action) a = uniform(explore, -1.0, 1.0);
      } else {
        action = agent.sample_action(obs.vec, explore, false).a;
      }
      StepResult r = env.step(action);
      // Episodes end on the time limit only; the bootstrap is kept.
      buffer.push({obs.vec, action, r.reward, r.obs.vec, false});
      ++steps;
      reward_sum += r.reward;
      rec.sum_se += r.sum_se;
      ++rec.steps;
      if (steps >= sac_config.warmup_steps && buffer.size() >= sac_config.batch_size) {
        for (std::size_t u = 0; u < sac_config.updates_per_step; ++u) {
          const UpdateStats st = agent.update(buffer, replay);
          rec.critic_loss += st.critic_loss;
          rec.actor_loss += st.actor_loss;
          ++updates;
        }
      }
      done = r.done;
      obs = std::move(r.obs);
    }
    agent.set_env_steps(steps);
    rec.mean_reward = reward_sum / rec.steps;
    if (updates > 0) {
      rec.critic_loss /= updates;
      rec.actor_loss /= updates;
    }
    rec.alpha = agent.alpha();
    result.curve.push_back(rec);
    if (on_episode) on_episode(rec);

    const bool last = ep + 1 == sac_config.episodes;
    if (sac_config.validation_interval > 0 && sac_config.validation_episodes > 0 &&
        ((ep + 1) % sac_config.validation_interval == 0 || last) &&
        steps >= sac_config.warmup_steps) {
      const double v = validate_agent(agent, env_config, seed, sac_config.validation_episodes,
                                      result.constraints);
      if (v > best) {
        best = v;
        result.best = agent;
        result.best_validation_se = v;
      }
    }
  }
  result.constraints.merge(env.constraints());
  return result;
}

void write_training_curve_csv(std::ostream& out, const std::vector<EpisodeRecord>& curve) {
  out << "episode,steps,mean_reward,sum_se,critic_loss,actor_loss,alpha\n";
  for (const auto& r : curve)
    out << r.episode << ',' << r.steps << ',' << format_double(r.mean_reward) << ','
        << format_double(r.sum_se) << ',' << format_double(r.critic_loss) << ','
        << format_double(r.actor_loss) << ',' << format_double(r.alpha) << '\n';
}

}  // namespace pass
