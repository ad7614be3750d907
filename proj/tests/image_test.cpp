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


#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "phishsnap/image.hpp"
#include "test_support.hpp"

namespace phishsnap {
namespace {

TEST(Grayscale, GrayPixelIsFixedPoint) {
  for (int v : {0, 1, 77, 128, 254, 255}) {
    for (int a : {0, 128, 255}) {
      const auto px = static_cast<std::uint8_t>(v);
      RawImage img(1, 1, Rgba{px, px, px, static_cast<std::uint8_t>(a)});
      EXPECT_NEAR(to_grayscale(img).at(0, 0), v, 1e-12);
    }
  }
}

TEST(Grayscale, Rec601Weights) {
  RawImage img(3, 1);
  img.at(0, 0) = {255, 0, 0, 255};
  img.at(1, 0) = {0, 255, 0, 255};
  img.at(2, 0) = {0, 0, 255, 7};
  const GrayImage g = to_grayscale(img);
  EXPECT_NEAR(g.at(0, 0), 76.245, 1e-12);
  EXPECT_NEAR(g.at(1, 0), 149.685, 1e-12);
  EXPECT_NEAR(g.at(2, 0), 29.07, 1e-12);
  EXPECT_DOUBLE_EQ(kLumaRed + kLumaGreen + kLumaBlue, 1.0);
}

TEST(Grayscale, PreservesDimensions) {
  RawImage img(5, 3, Rgba{10, 20, 30, 255});
  const GrayImage g = to_grayscale(img);
  EXPECT_EQ(g.width(), 5u);
  EXPECT_EQ(g.height(), 3u);
  for (double v : g.luma()) EXPECT_NEAR(v, 0.299 * 10 + 0.587 * 20 + 0.114 * 30, 1e-12);
}

TEST(RawImage, RejectsBadShapes) {
  EXPECT_THROW(RawImage(0, 4), InvalidInputError);
  EXPECT_THROW(RawImage(2, 2, std::vector<Rgba>(3)), InvalidInputError);
}

TEST(Resize, ConstantStaysConstant) {
  const GrayImage img(37, 23, 93.5);
  for (auto [w, h] : {std::pair{1, 1}, {32, 32}, {5, 40}, {74, 46}}) {
    const GrayImage r = resize(img, w, h);
    ASSERT_EQ(r.width(), static_cast<std::size_t>(w));
    ASSERT_EQ(r.height(), static_cast<std::size_t>(h));
    for (double v : r.luma()) EXPECT_NEAR(v, 93.5, 1e-9);
  }
}

TEST(Resize, TwoByTwoToOne) {
  const GrayImage img(2, 2, std::vector<double>{0, 0, 255, 255});
  EXPECT_DOUBLE_EQ(resize(img, 1, 1).at(0, 0), 127.5);
}

TEST(Resize, CheckerboardMatchesAreaOracle) {
  std::vector<double> board(64 * 64);
  for (std::size_t y = 0; y < 64; ++y) {
    for (std::size_t x = 0; x < 64; ++x) board[y * 64 + x] = ((x + y) % 2) ? 255.0 : 0.0;
  }
  const GrayImage out = resize(GrayImage(64, 64, board), 32, 32);
  const auto expected = oracle::naive_box_resize(board, 64, 64, 32, 32);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(out.luma()[i], expected[i], 1e-9);
}

TEST(Resize, NonIntegerRatiosMatchAreaOracle) {
  Rng rng(11);
  for (auto [sw, sh, tw, th] : {std::array<std::size_t, 4>{45, 31, 32, 32}, {100, 7, 32, 3}, {13, 13, 32, 32},
                                {1366, 768, 32, 32}}) {
    const GrayImage img = testing::random_gray(rng, sw, sh);
    const std::vector<double> src(img.luma().begin(), img.luma().end());
    const auto expected = oracle::naive_box_resize(src, sw, sh, tw, th);
    const GrayImage out = resize(img, tw, th);
    for (std::size_t i = 0; i < expected.size(); ++i) ASSERT_NEAR(out.luma()[i], expected[i], 1e-9);
  }
}

TEST(Resize, SameSizeIsIdentity) {
  Rng rng(3);
  const GrayImage img = testing::random_gray(rng, 32, 20);
  const GrayImage out = resize(img, 32, 20);
  for (std::size_t i = 0; i < img.luma().size(); ++i) EXPECT_NEAR(out.luma()[i], img.luma()[i], 1e-12);
}

TEST(Resize, OutputStaysWithinSourceRange) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sw = static_cast<std::size_t>(rng.range(1, 90)), sh = static_cast<std::size_t>(rng.range(1, 90));
    const auto tw = static_cast<std::size_t>(rng.range(1, 40)), th = static_cast<std::size_t>(rng.range(1, 40));
    const GrayImage img = testing::random_gray(rng, sw, sh, rng.uniform(0, 100), rng.uniform(100, 255));
    const auto [lo, hi] = std::minmax_element(img.luma().begin(), img.luma().end());
    const GrayImage out = resize(img, tw, th);
    for (double v : out.luma()) {
      ASSERT_GE(v, *lo - 1e-9);
      ASSERT_LE(v, *hi + 1e-9);
    }
  }
}

TEST(Resize, ZeroTargetIsInvalid) {
  const GrayImage img(4, 4, 1.0);
  EXPECT_THROW(resize(img, 0, 4), InvalidInputError);
  EXPECT_THROW(resize(img, 4, 0), InvalidInputError);
}

}  // namespace
}  // namespace phishsnap
