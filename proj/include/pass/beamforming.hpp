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

// Pinching phase matrix, effective channel and zero-forcing precoding.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pass/antenna.hpp"
#include "pass/channel.hpp"

namespace pass {

// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cdouble{0.0, 0.0}) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const cdouble> data() const { return data_; }

  CMatrix adjoint() const;
  double frobenius_norm_sq() const;

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

using CVector = std::vector<cdouble>;

class SingularChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// diag(exp(-j 2 pi x_n / lambda_g)).
CMatrix pinching_matrix(const AntennaConfig& antennas);

// Row k is h_k^H G.
CMatrix effective_channel(std::span<const CVector> h, const CMatrix& g);

struct PrecodeResult {
  CMatrix h_eff;  // K x N
  CMatrix w;      // N x K, ||w||_F^2 = p_max
  double zeta = 0.0;
  std::vector<double> snr;
  std::vector<double> se;
  bool loaded = false;       // diagonal loading was needed
  double pivot_ratio = 0.0;  // condition estimate of the Gram matrix
};

struct ZfOptions {
  double condition_threshold = 1e12;
  double loading_factor = 1e-9;  // delta = factor * trace(Gram) / K
  // A loaded solution is kept only if max |H_eff * raw - I| stays below
  // this; otherwise the channel is reported singular.
  double loaded_residual_tol = 1e-3;
};

// Solves a x = b for square a by Gaussian elimination with partial
// pivoting. Returns the ratio of largest to smallest pivot magnitude
// (infinity when a pivot is exactly zero, in which case x is untouched).
double solve_pivoted(CMatrix a, CMatrix b, CMatrix& x);

// W = zeta * H^H (H H^H)^-1 with zeta chosen so ||W||_F^2 = p_max.
// Requires N >= K. Throws SingularChannel when the Gram system cannot be
// solved even after diagonal loading. snr/se are left empty; see
// snr_and_se.
PrecodeResult zf_precoder(const CMatrix& h_eff, double p_max,
                          const ZfOptions& options = {});

// Power-normalized conjugate beamformer W = zeta * H_eff^H.
PrecodeResult matched_filter_precoder(const CMatrix& h_eff, double p_max);

struct LinkQuality {
  std::vector<double> snr;
  std::vector<double> se;
  double sum_se = 0.0;
};

// snr_k = |h_k^H G w_k|^2 / noise, computed from the physical channels.
LinkQuality snr_and_se(std::span<const CVector> h, const CMatrix& g,
                       const CMatrix& w, double noise);

// Same with inter-user interference in the denominator; used when the
// precoder does not null interference.
LinkQuality sinr_and_se(std::span<const CVector> h, const CMatrix& g,
                        const CMatrix& w, double noise);

}  // namespace pass
