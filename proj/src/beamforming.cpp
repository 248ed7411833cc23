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

#include "pass/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pass {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double CMatrix::frobenius_norm_sq() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_)
    throw std::invalid_argument("CMatrix product: inner dimensions differ");
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t p = 0; p < a.cols_; ++p) {
      const cdouble av = a(i, p);
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += av * b(p, j);
    }
  return out;
}

CMatrix pinching_matrix(const AntennaConfig& antennas) {
  const std::size_t n = antennas.size();
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    g(i, i) = std::polar(1.0, -2.0 * kPi * antennas.x[i] / antennas.guided_wavelength);
  return g;
}

CMatrix effective_channel(std::span<const CVector> h, const CMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("pinching matrix must be square");
  CMatrix out(h.size(), n);
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k].size() != n)
      throw std::invalid_argument("channel vector " + std::to_string(k) +
                                  " has wrong length");
    for (std::size_t m = 0; m < n; ++m) {
      const cdouble hc = std::conj(h[k][m]);
      for (std::size_t c = 0; c < n; ++c) out(k, c) += hc * g(m, c);
    }
  }
  return out;
}

double solve_pivoted(CMatrix a, CMatrix b, CMatrix& x) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("solve_pivoted: dimension mismatch");
  const std::size_t nrhs = b.cols();
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(a(r, col));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    max_pivot = std::max(max_pivot, best);
    min_pivot = std::min(min_pivot, best);
    if (best == 0.0) return std::numeric_limits<double>::infinity();
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      for (std::size_t c = 0; c < nrhs; ++c) std::swap(b(col, c), b(piv, c));
    }
    const cdouble d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cdouble f = a(r, col) / d;
      if (f == cdouble{0.0, 0.0}) continue;
      a(r, col) = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < nrhs; ++c) b(r, c) -= f * b(col, c);
    }
  }

  x = CMatrix(n, nrhs);
  for (std::size_t c = 0; c < nrhs; ++c) {
    for (std::size_t ri = n; ri-- > 0;) {
      cdouble s = b(ri, c);
      for (std::size_t j = ri + 1; j < n; ++j) s -= a(ri, j) * x(j, c);
      x(ri, c) = s / a(ri, ri);
    }
  }
  return max_pivot / min_pivot;
}

namespace {

double zf_residual(const CMatrix& h_eff, const CMatrix& raw) {
  const CMatrix prod = h_eff * raw;
  double worst = 0.0;
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j) {
      const cdouble target = i == j ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
      worst = std::max(worst, std::abs(prod(i, j) - target));
    }
  return worst;
}

void normalize(PrecodeResult& result, CMatrix raw, double p_max) {
  const double fro = std::sqrt(raw.frobenius_norm_sq());
  if (!(fro > 0.0) || !std::isfinite(fro))
    throw SingularChannel("precoder has zero or non-finite norm");
  result.zeta = std::sqrt(p_max) / fro;
  result.w = CMatrix(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r)
    for (std::size_t c = 0; c < raw.cols(); ++c) result.w(r, c) = result.zeta * raw(r, c);
}

}  // namespace

PrecodeResult zf_precoder(const CMatrix& h_eff, double p_max, const ZfOptions& options) {
  const std::size_t k = h_eff.rows();
  const std::size_t n = h_eff.cols();
  if (n < k) throw std::invalid_argument("zero-forcing requires N >= K");
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");

  const CMatrix h_adj = h_eff.adjoint();
  CMatrix gram = h_eff * h_adj;
  CMatrix inv;
  PrecodeResult result;
  result.h_eff = h_eff;
  result.pivot_ratio = solve_pivoted(gram, CMatrix::identity(k), inv);

  if (!(result.pivot_ratio <= options.condition_threshold)) {
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += gram(i, i).real();
    const double delta = options.loading_factor * trace / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) gram(i, i) += delta;
    result.loaded = true;
    result.pivot_ratio = solve_pivoted(gram, CMatrix::identity(k), inv);
    if (!(result.pivot_ratio <= options.condition_threshold))
      throw SingularChannel("Gram matrix singular after diagonal loading");
    CMatrix raw = h_adj * inv;
    if (!(zf_residual(h_eff, raw) <= options.loaded_residual_tol))
      throw SingularChannel("loaded zero-forcing solution does not null interference");
    normalize(result, std::move(raw), p_max);
    return result;
  }
  normalize(result, h_adj * inv, p_max);
  return result;
}

PrecodeResult matched_filter_precoder(const CMatrix& h_eff, double p_max) {
  PrecodeResult result;
  result.h_eff = h_eff;
  normalize(result, h_eff.adjoint(), p_max);
  return result;
}

namespace {

// gain(j, k) = h_j^H G w_k
cdouble link_gain(const CVector& h, const CMatrix& g, const CMatrix& w, std::size_t k) {
  cdouble s{0.0, 0.0};
  for (std::size_t m = 0; m < g.rows(); ++m) {
    cdouble gw{0.0, 0.0};
    for (std::size_t c = 0; c < g.cols(); ++c) gw += g(m, c) * w(c, k);
    s += std::conj(h[m]) * gw;
  }
  return s;
}

LinkQuality quality(std::span<const CVector> h, const CMatrix& g, const CMatrix& w,
                    double noise, bool with_interference) {
  if (w.cols() != h.size() || w.rows() != g.cols())
    throw std::invalid_argument("snr_and_se: precoder dimensions do not match");
  LinkQuality q;
  q.snr.resize(h.size());
  q.se.resize(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double signal = std::norm(link_gain(h[k], g, w, k));
    double denom = noise;
    if (with_interference)
      for (std::size_t j = 0; j < h.size(); ++j)
        if (j != k) denom += std::norm(link_gain(h[k], g, w, j));
    q.snr[k] = signal / denom;
    q.se[k] = std::log2(1.0 + q.snr[k]);
    q.sum_se += q.se[k];
  }
  return q;
}

}  // namespace

LinkQuality snr_and_se(std::span<const CVector> h, const CMatrix& g, const CMatrix& w,
                       double noise) {
  return quality(h, g, w, noise, false);
}

LinkQuality sinr_and_se(std::span<const CVector> h, const CMatrix& g, const CMatrix& w,
                        double noise) {
  return quality(h, g, w, noise, true);
}

}  // namespace pass
