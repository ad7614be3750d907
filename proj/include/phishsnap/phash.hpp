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

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "phishsnap/dct.hpp"
#include "phishsnap/error.hpp"
#include "phishsnap/image.hpp"

namespace phishsnap {

// 64-bit perceptual fingerprint.
//
// Bit i (0..63) belongs to low-frequency coefficient (u = i / 8, v = i % 8).
// Bit 0 is stored as the most significant bit of value(), so the canonical
// 16-digit lowercase hex form reads bit 0 first.
class PHash64 {
 public:
  static constexpr int kBits = 64;

  constexpr PHash64() = default;
  constexpr explicit PHash64(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const noexcept { return value_; }

  constexpr bool bit(int index) const noexcept { return (value_ >> (63 - index)) & 1u; }
  constexpr void set_bit(int index, bool on) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (63 - index);
    value_ = on ? (value_ | mask) : (value_ & ~mask);
  }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[i] = digits[(value_ >> (60 - 4 * i)) & 0xf];
    return out;
  }

  // Accepts exactly the canonical form: 16 lowercase hex digits.
  static std::optional<PHash64> from_hex(std::string_view text) {
    if (text.size() != 16) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : text) {
      std::uint64_t nibble = 0;
      if (c >= '0' && c <= '9') {
        nibble = static_cast<std::uint64_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        nibble = static_cast<std::uint64_t>(c - 'a' + 10);
      } else {
        return std::nullopt;
      }
      v = (v << 4) | nibble;
    }
    return PHash64(v);
  }

  static PHash64 parse(std::string_view text) {
    if (auto h = from_hex(text)) return *h;
    throw ParseError("invalid hash '" + std::string(text) + "': expected 16 lowercase hex digits");
  }

  friend constexpr auto operator<=>(const PHash64&, const PHash64&) = default;

 private:
  std::uint64_t value_ = 0;
};

// Number of differing bits; a metric on PHash64.
constexpr int hamming_distance(PHash64 a, PHash64 b) noexcept {
  return std::popcount(a.value() ^ b.value());
}

inline constexpr std::size_t kHashSide = 32;

// Relative slack below which a coefficient is treated as equal to the mean.
// Comparisons within this band are floating-point noise (e.g. the AC terms of
// a constant image) and resolve to 0, like exact ties.
inline constexpr double kTieTolerance = 1e-9;

// Bit = 1 iff the coefficient is strictly above the mean of the 63 AC
// coefficients. The DC term is left out of the mean but still gets a bit.
inline PHash64 quantize(const DctBlock& block) {
  double sum = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < block.coeffs.size(); ++i) {
    if (i != 0) sum += block.coeffs[i];
    scale = std::max(scale, std::abs(block.coeffs[i]));
  }
  const double mean = sum / 63.0;
  const double slack = kTieTolerance * scale;

  PHash64 hash;
  for (int i = 0; i < PHash64::kBits; ++i) {
    hash.set_bit(i, block.coeffs[static_cast<std::size_t>(i)] - mean > slack);
  }
  return hash;
}

// Hash of an already-gray image of any size. Values are not clamped here, so
// linear rescalings of the input produce the same hash.
inline PHash64 compute_phash(const GrayImage& gray) {
  return quantize(extract_low_freq(dct2d(resize(gray, kHashSide, kHashSide))));
}

inline PHash64 compute_phash(const RawImage& img) { return compute_phash(to_grayscale(img)); }

}  // namespace phishsnap
