// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "lgas/rng.hpp"

namespace rng = lgas::rng;

TEST(Philox, KnownAnswers) {
    // Reference vectors distributed with Random123.
    EXPECT_EQ(rng::philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (rng::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(rng::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (rng::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(rng::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (rng::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, UsableAtCompileTime) {
    constexpr auto out = rng::philox4x32_10({0, 0, 0, 0}, {0, 0});
    static_assert(out[0] == 0x6627e8d5u);
    SUCCEED();
}

TEST(Stream, SatisfiesUrbgConcept) {
    static_assert(std::uniform_random_bit_generator<rng::Stream>);
    rng::Stream s(1, 2);
    std::normal_distribution<double> gauss;
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) sum += gauss(s);
    EXPECT_LT(std::fabs(sum / 1000), 0.15);
}

TEST(Stream, ReproducibleAndIndependentOfOtherStreams) {
    rng::Stream a(42, 7);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 100; ++i) first.push_back(a());

    rng::Stream other(42, 8);
    for (int i = 0; i < 37; ++i) other();
    rng::Stream b(42, 7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(b(), first[i]);
}

TEST(Stream, WordsComeFromConsecutiveBlocks) {
    const std::uint64_t seed = 0x0123456789abcdefULL;
    const std::uint64_t id = 0xfedcba9876543210ULL;
    rng::Stream s(seed, id);
    const rng::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (std::uint32_t blk = 0; blk < 3; ++blk) {
        const auto out = rng::philox4x32_10(
            {blk, 0u, static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)}, key);
        EXPECT_EQ(s(), (static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
        EXPECT_EQ(s(), (static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
        EXPECT_EQ(s.blocks_used(), blk + 1u);
    }
}

TEST(Stream, DistinctSeedsAndStreamsDiffer) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        for (std::uint64_t id = 0; id < 64; ++id) seen.insert(rng::Stream(seed, id)());
    }
    EXPECT_EQ(seen.size(), 16u * 64u);
}

TEST(Stream, UniformMoments) {
    rng::Stream s(3, 0);
    const int n = 400000;
    double m1 = 0.0, m2 = 0.0, lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        m1 += u;
        m2 += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    // standard errors: 1/sqrt(12 n) and sqrt(4/45 n)
    EXPECT_NEAR(m1 / n, 0.5, 5 * std::sqrt(1.0 / (12.0 * n)));
    EXPECT_NEAR(m2 / n, 1.0 / 3.0, 5 * std::sqrt(4.0 / (45.0 * n)));
    EXPECT_LT(lo, 1e-4);
    EXPECT_GT(hi, 1 - 1e-4);
}

TEST(Stream, ChiSquareOnSixteenBins) {
    rng::Stream s(99, 5);
    std::array<int, 16> counts{};
    const int n = 160000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(s.uniform() * 16)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 16.0) * (c - n / 16.0) / (n / 16.0);
    EXPECT_LT(chi2, 37.7);  // 99.9% point of chi^2 with 15 degrees of freedom
}
