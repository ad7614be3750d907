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

// Deterministic synthetic screenshot corpus.
//
// Each brand gets a procedural login-page template. Captures (label safe) and
// mimics (label phishing, kept out of the split manifests) are the template
// under mild perturbation: luma noise, a brightness shift and a small
// translation. Unrelated pages (label phishing) are independent layouts.
//
// Layout on disk:
//   out/images/*.png
//   out/train.csv out/validation.csv out/test.csv out/mimics.csv
//   out/ground_truth.json
//
// Every image is a pure function of (spec, kind, brand, index); see
// derive_seed().

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "phishsnap/calibration.hpp"
#include "phishsnap/codec.hpp"
#include "phishsnap/error.hpp"
#include "phishsnap/image.hpp"
#include "phishsnap/phash.hpp"
#include "phishsnap/random.hpp"

namespace phishsnap {

struct CorpusSpec {
  std::uint64_t seed = 42;
  std::size_t brands = 20;
  // Bank captures per brand; these form the training split. Validation and
  // test captures are added so the per-brand split follows the fractions.
  std::size_t captures_per_brand = 25;
  std::size_t mimics_per_brand = 10;
  std::size_t unrelated = 200;
  double train = 0.7;
  double validation = 0.2;
  double test = 0.1;
  std::size_t width = 1366;
  std::size_t height = 768;

  void validate() const {
    if (brands < 1) throw InvalidInputError("corpus: brands must be >= 1");
    if (captures_per_brand < 1) throw InvalidInputError("corpus: captures per brand must be >= 1");
    if (width < 32 || height < 32) throw InvalidInputError("corpus: image must be at least 32x32");
    if (!(train > 0.0 && validation > 0.0 && test > 0.0)) {
      throw InvalidInputError("corpus: split fractions must be positive");
    }
    if (std::abs(train + validation + test - 1.0) > 1e-9) {
      throw InvalidInputError("corpus: split fractions must sum to 1");
    }
  }
};

enum class Split { kTrain, kValidation, kTest };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

// Largest-remainder apportionment of `total` items over `weights`; ties in
// the remainder go to the earlier bucket.
inline std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

struct BrandSplit {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  std::size_t total() const { return train + validation + test; }
};

// Per-brand capture counts: `captures_per_brand` for training, and enough
// extra captures that train/validation/test follow the fractions.
inline BrandSplit brand_split(const CorpusSpec& spec) {
  const std::size_t train = spec.captures_per_brand;
  const auto total = static_cast<std::size_t>(std::llround(static_cast<double>(train) / spec.train));
  const std::size_t rest = total > train ? total - train : 0;
  const auto held = apportion(rest, {spec.validation, spec.test});
  return {train, held[0], held[1]};
}

// ---------------------------------------------------------------------------
// Drawing primitives

namespace render {

inline std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

inline Rgba mix(Rgba a, Rgba b, double t) {
  return Rgba{clamp_byte(a.r + (b.r - a.r) * t), clamp_byte(a.g + (b.g - a.g) * t),
              clamp_byte(a.b + (b.b - a.b) * t), 255};
}

inline void fill_rect(RawImage& img, long x0, long y0, long w, long h, Rgba c) {
  const long W = static_cast<long>(img.width()), H = static_cast<long>(img.height());
  const long xa = std::clamp(x0, 0L, W), xb = std::clamp(x0 + w, 0L, W);
  const long ya = std::clamp(y0, 0L, H), yb = std::clamp(y0 + h, 0L, H);
  for (long y = ya; y < yb; ++y) {
    for (long x = xa; x < xb; ++x) img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = c;
  }
}

inline void frame_rect(RawImage& img, long x0, long y0, long w, long h, Rgba c, long t = 1) {
  fill_rect(img, x0, y0, w, t, c);
  fill_rect(img, x0, y0 + h - t, w, t, c);
  fill_rect(img, x0, y0, t, h, c);
  fill_rect(img, x0 + w - t, y0, t, h, c);
}

// Vertical gradient between two colors.
inline void gradient_rect(RawImage& img, long x0, long y0, long w, long h, Rgba top, Rgba bottom) {
  for (long y = 0; y < h; ++y) fill_rect(img, x0, y0 + y, w, 1, mix(top, bottom, h > 1 ? double(y) / (h - 1) : 0.0));
}

inline Rgba random_color(Rng& rng, int lo = 0, int hi = 255) {
  return Rgba{static_cast<std::uint8_t>(rng.range(lo, hi)), static_cast<std::uint8_t>(rng.range(lo, hi)),
              static_cast<std::uint8_t>(rng.range(lo, hi)), 255};
}

// A saturated color: one dominant channel, one weak.
inline Rgba brand_color(Rng& rng) {
  std::array<int, 3> ch{rng.range(150, 240), rng.range(20, 90), rng.range(40, 200)};
  const int rot = rng.range(0, 2);
  std::rotate(ch.begin(), ch.begin() + rot, ch.end());
  if (rng.chance(0.5)) std::swap(ch[1], ch[2]);
  return Rgba{static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]), static_cast<std::uint8_t>(ch[2]),
              255};
}

inline Rgba light_background(Rng& rng) {
  const int base = rng.range(232, 252);
  return Rgba{clamp_byte(base + rng.range(-4, 3)), clamp_byte(base + rng.range(-4, 3)),
              clamp_byte(base + rng.range(-4, 3)), 255};
}

// Lines of word-like dark strips.
inline void text_block(RawImage& img, Rng& rng, long x0, long y0, long w, int lines, long line_h, Rgba ink) {
  const long glyph_h = std::max(3L, line_h * 55 / 100);
  for (int l = 0; l < lines; ++l) {
    long x = x0;
    const long end = x0 + (l + 1 == lines ? w * rng.range(35, 85) / 100 : w);
    while (x < end) {
      const long word = rng.range(14, 70);
      fill_rect(img, x, y0 + l * line_h, std::min(word, end - x), glyph_h, ink);
      x += word + rng.range(6, 11);
    }
  }
}

// Photo-like block: gradient backdrop plus a few large soft shapes.
inline void photo_block(RawImage& img, Rng& rng, long x0, long y0, long w, long h) {
  gradient_rect(img, x0, y0, w, h, random_color(rng, 30, 230), random_color(rng, 30, 230));
  const int shapes = rng.range(3, 8);
  for (int s = 0; s < shapes; ++s) {
    const long sw = w * rng.range(15, 55) / 100, sh = h * rng.range(15, 60) / 100;
    fill_rect(img, x0 + rng.range(0, static_cast<int>(std::max(1L, w - sw))),
              y0 + rng.range(0, static_cast<int>(std::max(1L, h - sh))), sw, sh, random_color(rng, 10, 245));
  }
}

struct Theme {
  Rgba background;
  Rgba brand;
  Rgba ink;
  Rgba card;
};

// Login card: logo, heading, two input fields, submit button, links.
inline void login_card(RawImage& img, Rng& rng, const Theme& th, long x0, long y0, long w, long h) {
  fill_rect(img, x0 + 4, y0 + 4, w, h, mix(th.background, Rgba{0, 0, 0, 255}, 0.12));
  fill_rect(img, x0, y0, w, h, th.card);
  const long pad = w / 10;
  long y = y0 + h / 12;
  fill_rect(img, x0 + (w - w / 3) / 2, y, w / 3, h / 9, th.brand);  // logo
  y += h / 9 + h / 14;
  text_block(img, rng, x0 + pad, y, w - 2 * pad, 1, h / 16, th.ink);
  y += h / 10;
  const Rgba field_border = mix(th.card, Rgba{0, 0, 0, 255}, 0.35);
  for (int f = 0; f < 2; ++f) {
    fill_rect(img, x0 + pad, y, w - 2 * pad, h / 10, mix(th.card, Rgba{255, 255, 255, 255}, 0.5));
    frame_rect(img, x0 + pad, y, w - 2 * pad, h / 10, field_border, 2);
    y += h / 10 + h / 20;
  }
  fill_rect(img, x0 + pad, y, w - 2 * pad, h / 9, th.brand);  // button
  y += h / 9 + h / 20;
  text_block(img, rng, x0 + pad, y, w - 2 * pad, 2, h / 22, mix(th.brand, th.ink, 0.3));
}

// Adds a smooth random luminance field built from the page-scale cosine
// modes below 8x8; its peak magnitude is roughly `amplitude`.
inline void tonal_field(RawImage& img, Rng& rng, double amplitude) {
  constexpr int kModes = 8;
  const std::size_t W = img.width(), H = img.height();
  std::array<double, kModes * kModes> coeff{};
  for (int k = 1; k < kModes * kModes; ++k) coeff[k] = rng.normal() * amplitude / 8.0;
  std::vector<double> cx(kModes * W), cy(kModes * H);
  for (int u = 0; u < kModes; ++u) {
    for (std::size_t x = 0; x < W; ++x) cx[u * W + x] = std::cos(std::numbers::pi * (2.0 * x + 1) * u / (2.0 * W));
    for (std::size_t y = 0; y < H; ++y) cy[u * H + y] = std::cos(std::numbers::pi * (2.0 * y + 1) * u / (2.0 * H));
  }
  std::vector<double> row(kModes);
  for (std::size_t y = 0; y < H; ++y) {
    // row[v] = sum_u coeff(u, v) * cy_u(y)
    for (int v = 0; v < kModes; ++v) {
      double acc = 0.0;
      for (int u = 0; u < kModes; ++u) acc += coeff[u * kModes + v] * cy[u * H + y];
      row[v] = acc;
    }
    for (std::size_t x = 0; x < W; ++x) {
      double off = 0.0;
      for (int v = 0; v < kModes; ++v) off += row[v] * cx[v * W + x];
      Rgba& p = img.at(x, y);
      p = Rgba{clamp_byte(p.r + off), clamp_byte(p.g + off), clamp_byte(p.b + off), 255};
    }
  }
}

}  // namespace render

// ---------------------------------------------------------------------------
// Page generators

// Procedural login page for one brand.
inline RawImage render_template(const CorpusSpec& spec, std::size_t brand) {
  using namespace render;
  Rng rng(derive_seed(spec.seed, {1, brand}));
  const long W = static_cast<long>(spec.width), H = static_cast<long>(spec.height);

  Theme th;
  const bool dark = rng.chance(0.2);
  th.brand = brand_color(rng);
  th.background = dark ? random_color(rng, 15, 60) : light_background(rng);
  th.ink = dark ? Rgba{225, 225, 230, 255} : random_color(rng, 20, 70);
  th.card = dark ? mix(th.background, Rgba{255, 255, 255, 255}, 0.12) : Rgba{255, 255, 255, 255};
  RawImage img(spec.width, spec.height, th.background);

  // Large backdrop shape so no two templates share a flat background.
  {
    const Rgba tint = mix(th.background, rng.chance(0.5) ? th.brand : random_color(rng, 0, 255), rng.uniform(0.25, 0.7));
    const long bw = W * rng.range(25, 70) / 100, bh = H * rng.range(30, 80) / 100;
    fill_rect(img, rng.range(0, static_cast<int>(W - bw)), rng.range(0, static_cast<int>(H - bh)), bw, bh, tint);
  }

  long top = 0;
  if (rng.chance(0.75)) {
    const long bar = rng.range(48, 110);
    const Rgba bar_color = rng.chance(0.6) ? th.brand : (dark ? Rgba{8, 8, 12, 255} : Rgba{255, 255, 255, 255});
    fill_rect(img, 0, 0, W, bar, bar_color);
    fill_rect(img, 30, bar / 4, rng.range(90, 180), bar / 2, bar_color == th.brand ? th.card : th.brand);
    text_block(img, rng, W - rng.range(380, 520), bar * 2 / 5, rng.range(250, 350), 1, bar / 3,
               bar_color == th.brand ? th.card : th.ink);
    top = bar;
  }
  long bottom = H;
  if (rng.chance(0.5)) {
    const long foot = rng.range(40, 90);
    fill_rect(img, 0, H - foot, W, foot, mix(th.background, Rgba{0, 0, 0, 255}, dark ? 0.5 : 0.75));
    text_block(img, rng, 40, H - foot + foot / 3, W / 2, 1, foot / 3, mix(th.background, th.card, 0.5));
    bottom = H - foot;
  }
  const long body = bottom - top;
  const long card_w = rng.range(360, 470);
  const long card_h = std::min<long>(body - 30, rng.range(380, 520));

  switch (rng.range(0, 5)) {
    case 0: {  // centered card
      login_card(img, rng, th, (W - card_w) / 2, top + (body - card_h) / 2, card_w, card_h);
      break;
    }
    case 1: {  // card left, hero right
      const long hx = card_w + 140;
      photo_block(img, rng, hx, top + 40, W - hx - 60, body - 80);
      login_card(img, rng, th, 80, top + (body - card_h) / 2, card_w, card_h);
      break;
    }
    case 2: {  // hero left, card right
      photo_block(img, rng, 60, top + 40, W - card_w - 200, body - 80);
      login_card(img, rng, th, W - card_w - 80, top + (body - card_h) / 2, card_w, card_h);
      break;
    }
    case 3: {  // hero band across the top, card below
      const long band = body * rng.range(35, 50) / 100;
      photo_block(img, rng, 0, top, W, band);
      text_block(img, rng, 80, top + band + 40, W / 3, rng.range(4, 8), 22, th.ink);
      login_card(img, rng, th, W - card_w - rng.range(100, 300), top + band / 2, card_w,
                 std::min(card_h, bottom - top - band / 2 - 20));
      break;
    }
    case 4: {  // brand panel on one side
      const bool left = rng.chance(0.5);
      const long panel = W * rng.range(40, 55) / 100;
      const long px = left ? 0 : W - panel;
      gradient_rect(img, px, top, panel, body, th.brand, mix(th.brand, Rgba{0, 0, 0, 255}, 0.4));
      text_block(img, rng, px + 60, top + body / 3, panel - 140, 3, 40, th.card);
      const long free_x = left ? panel : 0;
      login_card(img, rng, th, free_x + (W - panel - card_w) / 2, top + (body - card_h) / 2, card_w, card_h);
      break;
    }
    default: {  // full-bleed backdrop with a card on top
      photo_block(img, rng, 0, top, W, body);
      login_card(img, rng, th, rng.range(60, static_cast<int>(W - card_w - 60)), top + (body - card_h) / 2, card_w,
                 card_h);
      break;
    }
  }
  return img;
}

// Independent page with no relation to any brand template.
inline RawImage render_unrelated(const CorpusSpec& spec, std::size_t index) {
  using namespace render;
  Rng rng(derive_seed(spec.seed, {2, index}));
  const long W = static_cast<long>(spec.width), H = static_cast<long>(spec.height);
  const bool dark = rng.chance(0.2);
  const Rgba bg = dark ? random_color(rng, 10, 70) : light_background(rng);
  const Rgba ink = dark ? Rgba{220, 220, 220, 255} : random_color(rng, 10, 80);
  const Rgba accent = brand_color(rng);
  RawImage img(spec.width, spec.height, bg);

  // Page-scale tonal layout: a coarse grid of tinted panels.
  if (rng.chance(0.8)) {
    const int cols = rng.range(1, 4), rows = rng.range(1, 3);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const long x0 = W * c / cols, y0 = H * r / rows;
        const Rgba tone = mix(bg, random_color(rng, 0, 255), rng.uniform(0.2, 1.0));
        gradient_rect(img, x0, y0, W * (c + 1) / cols - x0, H * (r + 1) / rows - y0, tone,
                      mix(tone, random_color(rng, 0, 255), rng.uniform(0.0, 0.6)));
      }
    }
  }

  long top = 0;
  if (rng.chance(0.4)) {
    top = rng.range(30, 70);
    fill_rect(img, 0, 0, W, top, rng.chance(0.5) ? accent : random_color(rng, 0, 255));
  }
  switch (rng.range(0, 4)) {
    case 0: {  // article: columns of text with inline images
      const long col = W * rng.range(50, 65) / 100;
      long y = top + 30;
      while (y < H - 60) {
        if (rng.chance(0.3)) {
          const long ph = rng.range(120, 260);
          photo_block(img, rng, 60, y, col, ph);
          y += ph + 20;
        } else {
          const int lines = rng.range(3, 9);
          text_block(img, rng, 60, y, col, lines, 20, ink);
          y += lines * 20 + 24;
        }
      }
      for (long sy = top + 30; sy < H - 150; sy += rng.range(150, 260)) {
        fill_rect(img, col + 120, sy, W - col - 180, rng.range(80, 140), random_color(rng, 40, 240));
      }
      break;
    }
    case 1: {  // thumbnail grid
      const int cols = rng.range(2, 6), rows = rng.range(2, 4);
      const long gap = rng.range(10, 40);
      const long cw = (W - gap * (cols + 1)) / cols, ch = (H - top - gap * (rows + 1)) / rows;
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          photo_block(img, rng, gap + c * (cw + gap), top + gap + r * (ch + gap), cw, ch);
        }
      }
      break;
    }
    case 2: {  // dashboard: sidebar plus tiles
      const long side = rng.range(180, 320);
      fill_rect(img, 0, top, side, H - top, dark ? Rgba{5, 5, 10, 255} : random_color(rng, 20, 90));
      text_block(img, rng, 24, top + 40, side - 48, rng.range(6, 14), 34, Rgba{200, 200, 210, 255});
      const int tiles = rng.range(3, 8);
      for (int t = 0; t < tiles; ++t) {
        const long tw = rng.range(200, 520), th = rng.range(120, 300);
        const long tx = side + rng.range(20, static_cast<int>(std::max(21L, W - side - tw - 20)));
        const long ty = top + rng.range(20, static_cast<int>(std::max(21L, H - top - th - 20)));
        fill_rect(img, tx, ty, tw, th, rng.chance(0.5) ? random_color(rng, 0, 255) : accent);
      }
      break;
    }
    case 3: {  // landing page: headline over hero, feature columns
      const long hero = (H - top) * rng.range(40, 65) / 100;
      photo_block(img, rng, 0, top, W, hero);
      text_block(img, rng, W / 8, top + hero / 3, W * 3 / 4, 2, 48, rng.chance(0.5) ? bg : ink);
      const int feats = rng.range(2, 4);
      const long fw = (W - 80) / feats;
      for (int f = 0; f < feats; ++f) {
        fill_rect(img, 40 + f * fw + 20, top + hero + 30, 80, 80, accent);
        text_block(img, rng, 40 + f * fw + 20, top + hero + 130, fw - 60, rng.range(2, 5), 22, ink);
      }
      break;
    }
    default: {  // scattered blocks
      const int blocks = rng.range(8, 20);
      for (int b = 0; b < blocks; ++b) {
        const long bw = rng.range(80, static_cast<int>(W / 2)), bh = rng.range(40, static_cast<int>(H / 2));
        fill_rect(img, rng.range(0, static_cast<int>(W - bw)), rng.range(static_cast<int>(top), static_cast<int>(H - bh)),
                  bw, bh, random_color(rng, 0, 255));
      }
      break;
    }
  }
  tonal_field(img, rng, rng.uniform(50.0, 90.0));
  return img;
}

struct Perturbation {
  double noise_sigma = 0.0;
  double brightness = 0.0;
  int dx = 0;
  int dy = 0;
  std::uint64_t noise_seed = 0;
};

inline constexpr double kMaxNoiseSigma = 8.0;
inline constexpr double kMaxBrightnessShift = 10.0;
inline constexpr int kMaxTranslation = 4;

inline Perturbation draw_perturbation(Rng& rng) {
  Perturbation p;
  p.noise_sigma = rng.uniform(2.0, kMaxNoiseSigma);
  p.brightness = rng.uniform(-kMaxBrightnessShift, kMaxBrightnessShift);
  p.dx = rng.range(-kMaxTranslation, kMaxTranslation);
  p.dy = rng.range(-kMaxTranslation, kMaxTranslation);
  p.noise_seed = rng.next();
  return p;
}

// Translation replicates edge pixels into the exposed border. Noise is one
// Gaussian draw per pixel added equally to all three channels.
inline RawImage perturb(const RawImage& src, const Perturbation& p) {
  const long W = static_cast<long>(src.width()), H = static_cast<long>(src.height());
  RawImage out(src.width(), src.height());
  Rng noise(p.noise_seed);
  for (long y = 0; y < H; ++y) {
    const long sy = std::clamp(y - p.dy, 0L, H - 1);
    for (long x = 0; x < W; ++x) {
      const long sx = std::clamp(x - p.dx, 0L, W - 1);
      const Rgba s = src.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
      const double offset = p.brightness + p.noise_sigma * noise.normal();
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
          Rgba{render::clamp_byte(s.r + offset), render::clamp_byte(s.g + offset), render::clamp_byte(s.b + offset),
               255};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus plan and generation

enum class SampleKind { kCapture, kMimic, kUnrelated };

inline const char* kind_name(SampleKind k) {
  switch (k) {
    case SampleKind::kCapture: return "capture";
    case SampleKind::kMimic: return "mimic";
    case SampleKind::kUnrelated: return "unrelated";
  }
  return "?";
}

struct PlannedImage {
  SampleKind kind = SampleKind::kCapture;
  std::size_t brand = 0;  // unused for unrelated pages
  std::size_t index = 0;  // within (kind, brand)
  Split split = Split::kTrain;
  std::string file;  // relative to the corpus root
  std::string url;
  Label label = Label::kSafe;
};

inline std::string brand_label(std::size_t b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "brand-%02zu", b);
  return buf;
}

inline std::string brand_url(std::size_t b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "https://login.brand%02zu.example.com/", b);
  return buf;
}

// Deterministic listing of every image in the corpus, in generation order.
inline std::vector<PlannedImage> plan_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<PlannedImage> plan;
  const BrandSplit per_brand = brand_split(spec);
  char buf[128];
  for (std::size_t b = 0; b < spec.brands; ++b) {
    for (std::size_t i = 0; i < per_brand.total(); ++i) {
      PlannedImage p;
      p.kind = SampleKind::kCapture;
      p.brand = b;
      p.index = i;
      p.split = i < per_brand.train ? Split::kTrain
                : i < per_brand.train + per_brand.validation ? Split::kValidation
                                                            : Split::kTest;
      std::snprintf(buf, sizeof buf, "images/capture_b%02zu_%03zu.png", b, i);
      p.file = buf;
      std::snprintf(buf, sizeof buf, "%s?capture=%zu", brand_url(b).c_str(), i);
      p.url = buf;
      p.label = Label::kSafe;
      plan.push_back(std::move(p));
    }
  }
  for (std::size_t b = 0; b < spec.brands; ++b) {
    for (std::size_t i = 0; i < spec.mimics_per_brand; ++i) {
      PlannedImage p;
      p.kind = SampleKind::kMimic;
      p.brand = b;
      p.index = i;
      p.split = Split::kTest;
      std::snprintf(buf, sizeof buf, "images/mimic_b%02zu_%03zu.png", b, i);
      p.file = buf;
      std::snprintf(buf, sizeof buf, "https://brand%02zu-account-verify.example.net/m%zu", b, i);
      p.url = buf;
      p.label = Label::kPhishing;
      plan.push_back(std::move(p));
    }
  }
  const auto unrelated = apportion(spec.unrelated, {spec.train, spec.validation, spec.test});
  for (std::size_t i = 0; i < spec.unrelated; ++i) {
    PlannedImage p;
    p.kind = SampleKind::kUnrelated;
    p.index = i;
    p.split = i < unrelated[0] ? Split::kTrain : i < unrelated[0] + unrelated[1] ? Split::kValidation : Split::kTest;
    std::snprintf(buf, sizeof buf, "images/unrelated_%04zu.png", i);
    p.file = buf;
    std::snprintf(buf, sizeof buf, "https://site%04zu.example.org/", i);
    p.url = buf;
    p.label = Label::kPhishing;
    plan.push_back(std::move(p));
  }
  return plan;
}

inline Perturbation perturbation_for(const CorpusSpec& spec, const PlannedImage& p) {
  Rng rng(derive_seed(spec.seed, {3, static_cast<std::uint64_t>(p.kind), p.brand, p.index}));
  return draw_perturbation(rng);
}

// Renders one planned image. `templates` holds one template per brand.
inline RawImage render_planned(const CorpusSpec& spec, const PlannedImage& p, const std::vector<RawImage>& templates) {
  if (p.kind == SampleKind::kUnrelated) return render_unrelated(spec, p.index);
  return perturb(templates.at(p.brand), perturbation_for(spec, p));
}

struct CorpusSummary {
  std::size_t images = 0;
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  std::size_t mimics = 0;
  std::vector<PHash64> template_hashes;
};

// Writes the corpus under out_dir. Images are rendered on `workers` threads
// (0 = hardware concurrency); each file's content depends only on the CorpusSpec
// and its plan entry.
inline CorpusSummary generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir,
                                     unsigned workers = 0) {
  namespace fs = std::filesystem;
  const auto plan = plan_corpus(spec);
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "images").string() + ": " + ec.message());

  std::vector<RawImage> templates;
  CorpusSummary summary;
  for (std::size_t b = 0; b < spec.brands; ++b) {
    templates.push_back(render_template(spec, b));
    summary.template_hashes.push_back(compute_phash(templates.back()));
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(plan.size());
  auto work = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      try {
        const RawImage img = render_planned(spec, plan[i], templates);
        write_file(out_dir / plan[i].file, encode_png(img, 3));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw IoError("corpus: " + e);
  }

  std::vector<LabeledSample> train, validation, test, mimics;
  for (const auto& p : plan) {
    LabeledSample s;
    s.url = p.url;
    s.label = p.label;
    if (p.kind != SampleKind::kUnrelated) s.brand = brand_label(p.brand);
    s.screenshot_path = p.file;
    if (p.kind == SampleKind::kMimic) mimics.push_back(std::move(s));
    else if (p.split == Split::kTrain) train.push_back(std::move(s));
    else if (p.split == Split::kValidation) validation.push_back(std::move(s));
    else test.push_back(std::move(s));
  }
  write_file(out_dir / "train.csv", format_manifest(train));
  write_file(out_dir / "validation.csv", format_manifest(validation));
  write_file(out_dir / "test.csv", format_manifest(test));
  write_file(out_dir / "mimics.csv", format_manifest(mimics));

  nlohmann::ordered_json truth;
  truth["seed"] = spec.seed;
  truth["width"] = spec.width;
  truth["height"] = spec.height;
  truth["brands"] = spec.brands;
  truth["captures_per_brand"] = spec.captures_per_brand;
  truth["mimics_per_brand"] = spec.mimics_per_brand;
  truth["unrelated"] = spec.unrelated;
  truth["split"] = {{"train", spec.train}, {"validation", spec.validation}, {"test", spec.test}};
  auto& brands = truth["templates"] = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < spec.brands; ++b) {
    brands.push_back({{"brand", brand_label(b)}, {"url", brand_url(b)}, {"hash", summary.template_hashes[b].to_hex()}});
  }
  auto& images = truth["images"] = nlohmann::ordered_json::array();
  for (const auto& p : plan) {
    nlohmann::ordered_json item;
    item["file"] = p.file;
    item["kind"] = kind_name(p.kind);
    item["label"] = label_name(p.label);
    item["split"] = p.kind == SampleKind::kMimic ? "mimics" : split_name(p.split);
    item["url"] = p.url;
    if (p.kind == SampleKind::kUnrelated) {
      item["brand"] = nullptr;
    } else {
      const Perturbation pt = perturbation_for(spec, p);
      item["brand"] = brand_label(p.brand);
      item["noise_sigma"] = pt.noise_sigma;
      item["brightness"] = pt.brightness;
      item["dx"] = pt.dx;
      item["dy"] = pt.dy;
    }
    images.push_back(std::move(item));
  }
  write_file(out_dir / "ground_truth.json", truth.dump(2) + "\n");

  summary.images = plan.size();
  summary.train = train.size();
  summary.validation = validation.size();
  summary.test = test.size();
  summary.mimics = mimics.size();
  return summary;
}

}  // namespace phishsnap
