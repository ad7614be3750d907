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

// In-memory image types and the normalization steps that feed the hash:
// RGBA -> Rec.601 luma -> box-filtered downsample.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phishsnap/error.hpp"

namespace phishsnap {

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

// Row-major RGBA raster. Channel range is enforced by the storage type.
class RawImage {
 public:
  RawImage() = default;

  RawImage(std::size_t width, std::size_t height, Rgba fill = {})
      : width_(width), height_(height), pixels_(checked_area(width, height), fill) {}

  RawImage(std::size_t width, std::size_t height, std::vector<Rgba> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_area(width, height)) {
      throw InvalidInputError("raw image: pixel count " + std::to_string(pixels_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const Rgba> pixels() const noexcept { return pixels_; }
  std::span<Rgba> pixels() noexcept { return pixels_; }

  const Rgba& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  Rgba& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

  friend bool operator==(const RawImage&, const RawImage&) = default;

 private:
  static std::size_t checked_area(std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) {
      throw InvalidInputError("raw image: zero dimension " + std::to_string(w) + "x" +
                              std::to_string(h));
    }
    return w * h;
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Rgba> pixels_;
};

// Row-major luma raster. Values are kept in [0, 255] by the normalizing
// operations; the unchecked constructor exists for linear-algebra callers
// (scaled images, transform outputs) that deliberately leave that range.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), luma_(width * height, fill) {
    if (width == 0 || height == 0) throw InvalidInputError("gray image: zero dimension");
  }

  GrayImage(std::size_t width, std::size_t height, std::vector<double> luma)
      : width_(width), height_(height), luma_(std::move(luma)) {
    if (width == 0 || height == 0) throw InvalidInputError("gray image: zero dimension");
    if (luma_.size() != width * height) {
      throw InvalidInputError("gray image: value count does not match dimensions");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const double> luma() const noexcept { return luma_; }
  std::span<double> luma() noexcept { return luma_; }

  double at(std::size_t x, std::size_t y) const { return luma_[y * width_ + x]; }
  double& at(std::size_t x, std::size_t y) { return luma_[y * width_ + x]; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> luma_;
};

inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

// Rec.601 luma; alpha is ignored. The result is clamped to [0, 255] so
// rounding in the weighted sum can never leave the range.
inline GrayImage to_grayscale(const RawImage& img) {
  std::vector<double> luma;
  luma.reserve(img.width() * img.height());
  for (const Rgba& p : img.pixels()) {
    const double v = kLumaRed * p.r + kLumaGreen * p.g + kLumaBlue * p.b;
    luma.push_back(std::clamp(v, 0.0, 255.0));
  }
  return GrayImage(img.width(), img.height(), std::move(luma));
}

namespace detail {

// One output cell of a 1-D box filter: the source samples it overlaps and
// the overlap length of each.
struct BoxTap {
  std::size_t first = 0;
  std::vector<double> weights;
  double total = 0.0;
};

// Output cell j covers the source interval [j*src/dst, (j+1)*src/dst).
// Boundaries are computed in integer units of 1/dst so that exact pixel
// edges produce exact weights.
inline std::vector<BoxTap> box_taps(std::size_t src, std::size_t dst) {
  std::vector<BoxTap> taps(dst);
  for (std::size_t j = 0; j < dst; ++j) {
    const std::size_t lo = j * src;        // in units of 1/dst
    const std::size_t hi = (j + 1) * src;  // exclusive
    const std::size_t first = lo / dst;
    const std::size_t last = (hi + dst - 1) / dst;  // exclusive
    BoxTap& tap = taps[j];
    tap.first = first;
    for (std::size_t i = first; i < last; ++i) {
      const std::size_t cell_lo = std::max(lo, i * dst);
      const std::size_t cell_hi = std::min(hi, (i + 1) * dst);
      const double w = static_cast<double>(cell_hi - cell_lo);
      tap.weights.push_back(w);
      tap.total += w;
    }
  }
  return taps;
}

}  // namespace detail

// Area-weighted (box filter) resampling. Separable: each output value is
// the mean of the source rectangle it covers, weighted by overlap area.
inline GrayImage resize(const GrayImage& img, std::size_t target_w, std::size_t target_h) {
  if (target_w == 0 || target_h == 0) {
    throw InvalidInputError("resize: zero target dimension " + std::to_string(target_w) + "x" +
                            std::to_string(target_h));
  }
  const std::size_t src_w = img.width();
  const std::size_t src_h = img.height();
  const auto xtaps = detail::box_taps(src_w, target_w);
  const auto ytaps = detail::box_taps(src_h, target_h);

  // Horizontal pass: src_h rows of target_w.
  std::vector<double> rows(src_h * target_w);
  for (std::size_t y = 0; y < src_h; ++y) {
    const double* src = img.luma().data() + y * src_w;
    for (std::size_t j = 0; j < target_w; ++j) {
      const auto& tap = xtaps[j];
      double acc = 0.0;
      for (std::size_t k = 0; k < tap.weights.size(); ++k) acc += tap.weights[k] * src[tap.first + k];
      rows[y * target_w + j] = acc / tap.total;
    }
  }

  std::vector<double> out(target_w * target_h);
  for (std::size_t i = 0; i < target_h; ++i) {
    const auto& tap = ytaps[i];
    for (std::size_t j = 0; j < target_w; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < tap.weights.size(); ++k) {
        acc += tap.weights[k] * rows[(tap.first + k) * target_w + j];
      }
      out[i * target_w + j] = acc / tap.total;
    }
  }
  return GrayImage(target_w, target_h, std::move(out));
}

}  // namespace phishsnap
