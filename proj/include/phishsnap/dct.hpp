/*
 * Copyright 2026 The PhishSnap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Orthonormal 2-D DCT-II and its inverse, computed separably as C * P * C^T
// with a precomputed N x N basis matrix.
//
//   X(u,v) = a(u) a(v) sum_x sum_y p(x,y) cos(pi(2x+1)u / 2N) cos(pi(2y+1)v / 2N)
//   a(0) = sqrt(1/N), a(k>0) = sqrt(2/N)
//
// Grids are row-major with x (and u) as the row index.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "phishsnap/error.hpp"
#include "phishsnap/image.hpp"

namespace phishsnap {

// Square row-major grid of real values.
class SquareGrid {
 public:
  SquareGrid() = default;
  explicit SquareGrid(std::size_t n, double fill = 0.0) : n_(n), values_(n * n, fill) {}
  SquareGrid(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != n * n) throw InvalidInputError("grid: value count is not n*n");
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * n_ + col]; }
  double& operator()(std::size_t row, std::size_t col) { return values_[row * n_ + col]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// The 8x8 low-frequency corner of a DCT spectrum; (0,0) is the DC term.
struct DctBlock {
  static constexpr std::size_t kSide = 8;
  std::array<double, kSide * kSide> coeffs{};

  double operator()(std::size_t u, std::size_t v) const { return coeffs[u * kSide + v]; }
  double& operator()(std::size_t u, std::size_t v) { return coeffs[u * kSide + v]; }
};

// basis(k, x) = a(k) * cos(pi (2x+1) k / 2N)
inline SquareGrid dct_basis(std::size_t n) {
  SquareGrid basis(n);
  const double dn = static_cast<double>(n);
  const double a0 = std::sqrt(1.0 / dn);
  const double ak = std::sqrt(2.0 / dn);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      const double angle = std::numbers::pi * static_cast<double>((2 * x + 1) * k) / (2.0 * dn);
      basis(k, x) = (k == 0 ? a0 : ak) * std::cos(angle);
    }
  }
  return basis;
}

namespace detail {

// Basis matrices are reused across calls; the hash always asks for N = 32.
inline const SquareGrid& cached_basis(std::size_t n) {
  if (n == 32) {
    static const SquareGrid basis32 = dct_basis(32);
    return basis32;
  }
  thread_local SquareGrid other;
  if (other.size() != n) other = dct_basis(n);
  return other;
}

// Forward: B * in * B^T. Inverse: B^T * in * B.
inline SquareGrid sandwich(const SquareGrid& basis, const SquareGrid& in, bool inverse) {
  const std::size_t n = in.size();
  SquareGrid tmp(n);
  // tmp = L * in, where L = B (forward) or B^T (inverse)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += (inverse ? basis(k, i) : basis(i, k)) * in(k, j);
      }
      tmp(i, j) = acc;
    }
  }
  // out = tmp * R, where R = B^T (forward) or B (inverse)
  SquareGrid out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += tmp(i, k) * (inverse ? basis(k, j) : basis(j, k));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace detail

inline SquareGrid dct2d(const SquareGrid& pixels) {
  if (pixels.size() == 0) throw InvalidInputError("dct2d: empty grid");
  return detail::sandwich(detail::cached_basis(pixels.size()), pixels, false);
}

// Rows of the image become x, columns y.
inline SquareGrid dct2d(const GrayImage& img) {
  if (img.width() != img.height()) {
    throw InvalidInputError("dct2d: non-square input " + std::to_string(img.width()) + "x" +
                            std::to_string(img.height()));
  }
  const std::size_t n = img.width();
  return dct2d(SquareGrid(n, std::vector<double>(img.luma().begin(), img.luma().end())));
}

inline SquareGrid idct2d(const SquareGrid& coeffs) {
  if (coeffs.size() == 0) throw InvalidInputError("idct2d: empty grid");
  return detail::sandwich(detail::cached_basis(coeffs.size()), coeffs, true);
}

inline DctBlock extract_low_freq(const SquareGrid& coeffs) {
  if (coeffs.size() < DctBlock::kSide) {
    throw InvalidInputError("extract_low_freq: grid side " + std::to_string(coeffs.size()) +
                            " is smaller than 8");
  }
  DctBlock block;
  for (std::size_t u = 0; u < DctBlock::kSide; ++u) {
    for (std::size_t v = 0; v < DctBlock::kSide; ++v) block(u, v) = coeffs(u, v);
  }
  return block;
}

}  // namespace phishsnap
