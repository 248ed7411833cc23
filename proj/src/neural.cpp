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

#include "pass/neural.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pass {

namespace {

void transpose(const double* src, std::size_t rows, std::size_t cols, double* dst) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output sizes");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0)
      throw std::invalid_argument("Mlp layer sizes must be positive");
    LayerView v;
    v.in = sizes_[l];
    v.out = sizes_[l + 1];
    v.w = offset;
    offset += v.in * v.out;
    v.b = offset;
    offset += v.out;
    layers_.push_back(v);
  }
  params_.assign(offset, 0.0);
}

Mlp Mlp::create(std::vector<std::size_t> sizes, Rng& rng, double final_scale) {
  Mlp net(std::move(sizes));
  for (std::size_t l = 0; l < net.layers_.size(); ++l) {
    const LayerView& v = net.layers_[l];
    double bound = 1.0 / std::sqrt(static_cast<double>(v.in));
    if (l + 1 == net.layers_.size()) bound *= final_scale;
    for (std::size_t i = 0; i < v.in * v.out; ++i) net.params_[v.w + i] = uniform(rng, -bound, bound);
    for (std::size_t o = 0; o < v.out; ++o) net.params_[v.b + o] = uniform(rng, -bound, bound);
  }
  return net;
}

double& Mlp::weight(std::size_t layer, std::size_t in, std::size_t out) {
  const LayerView& v = layers_.at(layer);
  return params_[v.w + in * v.out + out];
}

double& Mlp::bias(std::size_t layer, std::size_t out) { return params_[layers_.at(layer).b + out]; }

Matrix Mlp::forward(const Matrix& x, MlpCache* cache) const {
  if (x.cols() != input_size())
    throw std::invalid_argument("Mlp::forward: expected " + std::to_string(input_size()) +
                                " inputs, got " + std::to_string(x.cols()));
  const std::size_t batch = x.rows();
  if (cache) {
    cache->owner = this;
    cache->generation = generation_;
    cache->inputs.clear();
    cache->pre.clear();
  }
  Matrix act = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerView& v = layers_[l];
    Matrix z(batch, v.out);
    kernels_->gemm(batch, v.out, v.in, act.data(), v.in, params_.data() + v.w, v.out, z.data(),
                   v.out, false);
    const double* b = params_.data() + v.b;
    for (std::size_t r = 0; r < batch; ++r) {
      double* zr = z.data() + r * v.out;
      for (std::size_t o = 0; o < v.out; ++o) zr[o] += b[o];
    }
    const bool last = l + 1 == layers_.size();
    if (cache) cache->inputs.push_back(std::move(act));
    if (last) {
      act = std::move(z);
    } else {
      Matrix h(batch, v.out);
      kernels_->relu(z.data(), h.data(), z.size());
      if (cache) cache->pre.push_back(std::move(z));
      act = std::move(h);
    }
  }
  return act;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Matrix in(1, x.size());
  std::copy(x.begin(), x.end(), in.data());
  const Matrix out = forward(in, nullptr);
  return {out.data(), out.data() + out.size()};
}

void Mlp::backward(const MlpCache& cache, const Matrix& dy, std::span<double> grads,
                   Matrix* dx) const {
  if (cache.owner != this || cache.generation != generation_ ||
      cache.inputs.size() != layers_.size())
    throw std::logic_error("Mlp::backward: stale or foreign cache");
  const std::size_t batch = cache.inputs.front().rows();
  if (dy.rows() != batch || dy.cols() != output_size())
    throw std::invalid_argument("Mlp::backward: output gradient has wrong shape");
  const bool want_params = !grads.empty();
  if (want_params && grads.size() != params_.size())
    throw std::invalid_argument("Mlp::backward: gradient buffer has wrong size");

  Matrix g = dy;
  std::vector<double> scratch;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const LayerView& v = layers_[l];
    if (l + 1 != layers_.size()) kernels_->relu_backward(cache.pre[l].data(), g.data(), g.size());
    const Matrix& input = cache.inputs[l];

    if (want_params) {
      // dW = input^T g
      scratch.resize(v.in * batch);
      transpose(input.data(), batch, v.in, scratch.data());
      kernels_->gemm(v.in, v.out, batch, scratch.data(), batch, g.data(), v.out,
                     grads.data() + v.w, v.out, false);
      double* db = grads.data() + v.b;
      std::fill(db, db + v.out, 0.0);
      for (std::size_t r = 0; r < batch; ++r) {
        const double* gr = g.data() + r * v.out;
        for (std::size_t o = 0; o < v.out; ++o) db[o] += gr[o];
      }
    }

    if (l == 0 && dx == nullptr) break;
    // dinput = g W^T
    scratch.resize(v.out * v.in);
    transpose(params_.data() + v.w, v.in, v.out, scratch.data());
    Matrix prev(batch, v.in);
    kernels_->gemm(batch, v.in, v.out, g.data(), v.out, scratch.data(), v.in, prev.data(), v.in,
                   false);
    g = std::move(prev);
  }
  if (dx) *dx = std::move(g);
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const kernels::KernelTable& table) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double corr1 = 1.0 - std::pow(state.beta1, t);
  const double corr2 = 1.0 - std::pow(state.beta2, t);
  table.adam(params.data(), grads.data(), state.m.data(), state.v.data(), params.size(), state.lr,
             state.beta1, state.beta2, state.eps, corr1, corr2);
}

void polyak_update(Mlp& target, const Mlp& source, double tau) {
  if (target.sizes() != source.sizes())
    throw std::invalid_argument("polyak_update: network shapes differ");
  target.kernels().polyak(target.params().data(), source.params().data(), target.num_params(),
                          tau);
  target.touch();
}

namespace io {

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }

namespace {
void read_bytes(std::istream& in, unsigned char* b, std::size_t n) {
  in.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("checkpoint truncated");
}
}  // namespace

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  read_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  read_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace io

namespace {
constexpr char kMlpMagic[8] = {'P', 'A', 'S', 'S', 'M', 'L', 'P', '\0'};
constexpr std::uint32_t kMlpVersion = 1;
constexpr std::uint64_t kMaxLayerWidth = 1u << 20;
}  // namespace

void write_mlp(std::ostream& out, const Mlp& net) {
  out.write(kMlpMagic, sizeof(kMlpMagic));
  io::write_u32(out, kMlpVersion);
  io::write_u64(out, net.sizes().size());
  for (std::size_t s : net.sizes()) io::write_u64(out, s);
  io::write_u64(out, net.num_params());
  for (double p : net.params()) io::write_f64(out, p);
  if (!out) throw std::runtime_error("failed writing network checkpoint");
}

Mlp read_mlp(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMlpMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a network checkpoint (bad magic)");
  const std::uint32_t version = io::read_u32(in);
  if (version != kMlpVersion)
    throw std::runtime_error("unsupported network checkpoint version " + std::to_string(version));
  const std::uint64_t count = io::read_u64(in);
  if (count < 2 || count > 64) throw std::runtime_error("corrupt network checkpoint (layer count)");
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    s = io::read_u64(in);
    if (s == 0 || s > kMaxLayerWidth) throw std::runtime_error("corrupt network checkpoint (size)");
  }
  Mlp net(sizes);
  if (io::read_u64(in) != net.num_params())
    throw std::runtime_error("corrupt network checkpoint (parameter count)");
  for (double& p : net.params()) p = io::read_f64(in);
  net.touch();
  return net;
}

}  // namespace pass
