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

#pragma once

// Small fully connected networks with hand-written reverse mode, Adam and
// a versioned binary checkpoint format.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pass/kernels.hpp"
#include "pass/rng.hpp"

namespace pass {

// Dense row-major real matrix; rows are samples in batched code.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class Mlp;

// Activations recorded by a forward pass, consumed by backward.
struct MlpCache {
  const Mlp* owner = nullptr;
  std::uint64_t generation = 0;
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> pre;     // pre-activation of each hidden layer
};

// ReLU hidden layers, linear output layer. Parameters live in one flat
// array: for each layer its in x out weight block (row-major, weight(i, o)
// multiplies input i into output o) followed by its bias.
class Mlp {
 public:
  Mlp() = default;
  // Zero-initialized network; sizes = {input, hidden..., output}.
  explicit Mlp(std::vector<std::size_t> sizes);

  // Fan-in uniform initialization, bound 1/sqrt(fan_in) for weights and
  // biases; the output layer is additionally scaled by final_scale.
  static Mlp create(std::vector<std::size_t> sizes, Rng& rng, double final_scale = 1e-2);

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }
  std::size_t num_params() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  double& weight(std::size_t layer, std::size_t in, std::size_t out);
  double& bias(std::size_t layer, std::size_t out);

  // Must be called after mutating params() directly; invalidates caches.
  void touch() { ++generation_; }
  std::uint64_t generation() const { return generation_; }

  void set_kernels(const kernels::KernelTable& table) { kernels_ = &table; }
  const kernels::KernelTable& kernels() const { return *kernels_; }

  // x is batch x input. Fills cache when non-null.
  Matrix forward(const Matrix& x, MlpCache* cache = nullptr) const;
  std::vector<double> forward(std::span<const double> x) const;

  // dy is batch x output, the gradient of a scalar loss w.r.t. the
  // outputs. Writes parameter gradients into grads (skipped when empty)
  // and the input gradient into dx (when non-null). Throws
  // std::logic_error for a cache from another network or parameter state.
  void backward(const MlpCache& cache, const Matrix& dy, std::span<double> grads,
                Matrix* dx) const;

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.sizes_ == b.sizes_ && a.params_ == b.params_;
  }

 private:
  struct LayerView {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t w = 0;  // offset into params_
    std::size_t b = 0;
  };

  std::vector<std::size_t> sizes_;
  std::vector<LayerView> layers_;
  std::vector<double> params_;
  std::uint64_t generation_ = 0;
  const kernels::KernelTable* kernels_ = &kernels::active();
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  AdamState(std::size_t n, double learning_rate)
      : m(n, 0.0), v(n, 0.0), lr(learning_rate) {}
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const kernels::KernelTable& table = kernels::active());

// target <- (1 - tau) target + tau source
void polyak_update(Mlp& target, const Mlp& source, double tau);

// Binary checkpoint: magic "PASSMLP\0", u32 version, u64 layer-size count,
// u64 sizes, u64 parameter count, IEEE-754 doubles (little-endian).
void write_mlp(std::ostream& out, const Mlp& net);
Mlp read_mlp(std::istream& in);

// Raw binary helpers shared with the agent checkpoint.
namespace io {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
}  // namespace io

}  // namespace pass
