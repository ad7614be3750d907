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

#include <array>

#include "oracles.hpp"
#include "phishsnap/codec.hpp"
#include "phishsnap/phash.hpp"
#include "goldens.hpp"
#include "test_support.hpp"

namespace phishsnap {
namespace {

DctBlock block_from(const std::array<double, 64>& c) {
  DctBlock b;
  b.coeffs = c;
  return b;
}

TEST(Quantize, AllZeroBlock) { EXPECT_EQ(quantize(DctBlock{}).value(), 0u); }

TEST(Quantize, DcOnlySetsFirstBit) {
  DctBlock b;
  b(0, 0) = 320.0;
  EXPECT_EQ(quantize(b).to_hex(), "8000000000000000");
}

TEST(Quantize, DcIsExcludedFromMean) {
  // DC is huge but the AC mean is 1; only entries above 1 (and DC) set bits.
  DctBlock b;
  b.coeffs.fill(1.0);
  b(0, 0) = 1e6;
  b(7, 7) = 2.0;
  const double expected_mean = (62.0 + 2.0) / 63.0;
  ASSERT_GT(2.0, expected_mean);
  const PHash64 h = quantize(b);
  EXPECT_TRUE(h.bit(0));
  EXPECT_TRUE(h.bit(63));
  for (int i = 1; i < 63; ++i) EXPECT_FALSE(h.bit(i));
}

TEST(Quantize, MatchesOracleOnRampBlock) {
  std::array<double, 64> c{};
  for (std::size_t u = 0; u < 8; ++u) {
    for (std::size_t v = 0; v < 8; ++v) c[u * 8 + v] = static_cast<double>(u + v);
  }
  EXPECT_EQ(quantize(block_from(c)).value(), oracle::naive_quantize(c.data()));
  // Mean of u+v over AC entries is 7*64/63; bits are set where u+v >= 8.
  const PHash64 h = quantize(block_from(c));
  for (int i = 0; i < 64; ++i) EXPECT_EQ(h.bit(i), (i / 8 + i % 8) >= 8) << i;
}

TEST(Quantize, MatchesOracleOnRandomBlocks) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 64> c{};
    for (double& x : c) x = rng.normal() * 100.0;
    ASSERT_EQ(quantize(block_from(c)).value(), oracle::naive_quantize(c.data()));
  }
}

TEST(PHash, ConstantImagesHashToDcBit) {
  for (double v : {1.0, 128.0, 255.0}) {
    EXPECT_EQ(compute_phash(GrayImage(1366, 768, v)).to_hex(), "8000000000000000");
    EXPECT_EQ(compute_phash(GrayImage(32, 32, v)).to_hex(), "8000000000000000");
  }
  EXPECT_EQ(compute_phash(GrayImage(10, 10, 0.0)).value(), 0u);
}

TEST(PHash, PipelineMatchesOracleComposition) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = testing::random_gray(rng, rng.range(32, 300), rng.range(32, 300));
    const std::vector<double> src(img.luma().begin(), img.luma().end());
    const auto small = oracle::naive_box_resize(src, img.width(), img.height(), 32, 32);
    const auto spectrum = oracle::naive_dct2d(small, 32);
    std::array<double, 64> low{};
    for (std::size_t u = 0; u < 8; ++u) {
      for (std::size_t v = 0; v < 8; ++v) low[u * 8 + v] = spectrum[u * 32 + v];
    }
    ASSERT_EQ(compute_phash(img).value(), oracle::naive_quantize(low.data()));
  }
}

TEST(PHash, InvariantUnderLinearScaling) {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage img = testing::random_gray(rng, 64, 48);
    const PHash64 base = compute_phash(img);
    for (double k : {0.5, 2.0}) {
      std::vector<double> scaled(img.luma().begin(), img.luma().end());
      for (double& v : scaled) v *= k;
      EXPECT_EQ(compute_phash(GrayImage(64, 48, scaled)), base);
    }
  }
}

TEST(PHash, UnrelatedRandomImagesAreFarApart) {
  Rng rng(31);
  double total = 0.0;
  const int pairs = 500;
  for (int i = 0; i < pairs; ++i) {
    const PHash64 a = compute_phash(testing::random_gray(rng, 64, 64));
    const PHash64 b = compute_phash(testing::random_gray(rng, 64, 64));
    total += hamming_distance(a, b);
  }
  const double mean = total / pairs;
  EXPECT_GE(mean, 28.0);
  EXPECT_LE(mean, 36.0);
}

TEST(PHash, GoldenFixture) {
  const RawImage img = decode_image_file(testing::data_path("login_fixture.png"));
  EXPECT_EQ(compute_phash(img).to_hex(), PHISHSNAP_GOLDEN_FIXTURE_HASH);
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming_distance(PHash64(0), PHash64(~0ULL)), 64);
  EXPECT_EQ(hamming_distance(PHash64(0xff), PHash64(0x0f)), 4);
  EXPECT_EQ(hamming_distance(PHash64(0x8000000000000000ULL), PHash64(0)), 1);
}

TEST(Hamming, MetricAxioms) {
  Rng rng(37);
  for (int trial = 0; trial < 10000; ++trial) {
    const PHash64 a(rng.next()), b(rng.next());
    // Bias c toward a so the triangle inequality is exercised near equality.
    const PHash64 c(trial % 2 ? rng.next() : a.value() ^ (1ULL << rng.range(0, 63)));
    const int ab = hamming_distance(a, b), bc = hamming_distance(b, c), ac = hamming_distance(a, c);
    ASSERT_EQ(hamming_distance(a, a), 0);
    ASSERT_EQ(ab, hamming_distance(b, a));
    ASSERT_EQ(ab, oracle::naive_popcount(a.value() ^ b.value()));
    ASSERT_EQ(ab == 0, a == b);
    ASSERT_LE(ac, ab + bc);
    ASSERT_GE(ab, 0);
    ASSERT_LE(ab, 64);
  }
}

TEST(Hex, RoundTripAndFormat) {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const PHash64 h(rng.next());
    const std::string hex = h.to_hex();
    ASSERT_EQ(hex.size(), 16u);
    for (char c : hex) ASSERT_TRUE((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'));
    ASSERT_EQ(PHash64::parse(hex), h);
  }
  EXPECT_EQ(PHash64(1).to_hex(), "0000000000000001");
}

TEST(Hex, BitZeroIsMostSignificant) {
  PHash64 h;
  h.set_bit(0, true);
  EXPECT_EQ(h.to_hex(), "8000000000000000");
  h.set_bit(0, false);
  h.set_bit(63, true);
  EXPECT_EQ(h.to_hex(), "0000000000000001");
}

TEST(Hex, RejectsMalformed) {
  for (const char* bad : {"", "123", "ABCDEF0123456789", "0123456789abcdeg", "0123456789abcdef0", " 123456789abcdef"}) {
    EXPECT_FALSE(PHash64::from_hex(bad).has_value()) << bad;
    EXPECT_THROW(PHash64::parse(bad), ParseError) << bad;
  }
}

}  // namespace
}  // namespace phishsnap
