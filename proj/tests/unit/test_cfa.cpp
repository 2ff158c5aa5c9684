#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace rgbw;
using namespace rgbw::testing;

TEST(Patterns, BuiltinTilesHaveExpectedCounts) {
    const CfaPattern b = patterns::bayer();
    EXPECT_EQ(b.tile_height(), 2u);
    EXPECT_EQ(b.count(Channel::G), 2u);
    EXPECT_FALSE(b.has(Channel::W));
    for (const CfaPattern& p : rgbw_patterns()) {
        EXPECT_EQ(p.tile_height(), 4u) << p.name();
        EXPECT_EQ(p.tile_width(), 4u) << p.name();
        EXPECT_TRUE(p.has(Channel::R) && p.has(Channel::G) && p.has(Channel::B) && p.has(Channel::W)) << p.name();
    }
    EXPECT_EQ(patterns::sparse3().count(Channel::W), 13u);
    EXPECT_EQ(patterns::kodak().count(Channel::W), 8u);
    EXPECT_EQ(patterns::sony().count(Channel::W), 8u);
}

TEST(Patterns, LookupByName) {
    EXPECT_EQ(patterns::builtin("kodak"), patterns::kodak());
    EXPECT_FALSE(patterns::builtin("nope").has_value());
    EXPECT_EQ(patterns::all().size(), 4u);
}

TEST(Patterns, RejectsMalformedTiles) {
    EXPECT_THROW(CfaPattern("x", {}), InvalidArgument);
    EXPECT_THROW(CfaPattern("x", {{Channel::R, Channel::G}, {Channel::B}}), InvalidArgument);
    EXPECT_THROW(patterns::tile_from({"RX"}), InvalidArgument);
}

TEST(ExpandMask, BayerTwoByTwo) {
    const CfaMask h = expand_mask(patterns::bayer(), 2, 2);
    const auto G = index_of(Channel::G), R = index_of(Channel::R), B = index_of(Channel::B), W = index_of(Channel::W);
    EXPECT_EQ(h(0, 0, G), 1.0);
    EXPECT_EQ(h(1, 1, G), 1.0);
    EXPECT_EQ(h(0, 1, G), 0.0);
    EXPECT_EQ(h(0, 1, R), 1.0);
    EXPECT_EQ(h(1, 0, B), 1.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(h(i, j, W), 0.0);
}

TEST(ExpandMask, BayerFourByFourIsPeriodic) {
    const CfaMask small = expand_mask(patterns::bayer(), 2, 2);
    const CfaMask h = expand_mask(patterns::bayer(), 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(h.label(i, j), small.label(i % 2, j % 2));
}

TEST(ExpandMask, KodakEightByEightCountsWhite) {
    const CfaMask h = expand_mask(patterns::kodak(), 8, 8);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) ones += h(i, j, 3) == 1.0;
    EXPECT_EQ(ones, 32u);
    EXPECT_EQ(h.count(Channel::W), 32u);
}

TEST(ExpandMask, IsOneHot) {
    for (const CfaPattern& p : patterns::all()) {
        const Tensor h = expand_mask(p, 7, 9).tensor();
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 9; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 4; ++k) s += h(i, j, k);
                EXPECT_EQ(s, 1.0);
            }
    }
}

TEST(ExpandMask, RejectsZeroSize) {
    EXPECT_THROW(expand_mask(patterns::bayer(), 0, 3), InvalidArgument);
}

TEST(Forward, ConstantPlanesOnBayer) {
    Tensor x(2, 2, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 4; ++k) x(i, j, k) = static_cast<double>(k + 1);
    const Tensor y = forward(x, expand_mask(patterns::bayer(), 2, 2));
    EXPECT_EQ(y(0, 0, 0), 2.0);
    EXPECT_EQ(y(0, 1, 0), 1.0);
    EXPECT_EQ(y(1, 0, 0), 3.0);
    EXPECT_EQ(y(1, 1, 0), 2.0);
}

TEST(Forward, AllWhiteMaskSelectsWPlane) {
    std::mt19937_64 rng(5);
    const Tensor x = random_tensor(5, 6, 4, rng);
    const CfaMask h(5, 6, std::vector<Channel>(30, Channel::W));
    const Tensor y = forward(x, h);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(y(i, j, 0), x(i, j, 3));
}

TEST(Forward, KodakMatchesScalarOracle) {
    std::mt19937_64 rng(17);
    const Tensor x = random_tensor(4, 4, 4, rng);
    const CfaMask h = expand_mask(patterns::kodak(), 4, 4);
    const Tensor y = forward(x, h);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(y(i, j, 0), oracle_forward_at(x, h, i, j));
}

TEST(Forward, RejectsShapeMismatch) {
    const CfaMask h = expand_mask(patterns::bayer(), 4, 4);
    EXPECT_THROW(forward(Tensor(4, 5, 4), h), ShapeError);
    EXPECT_THROW(forward(Tensor(4, 4, 3), h), ShapeError);
    EXPECT_THROW(adjoint(Tensor(4, 4, 2), h), ShapeError);
}

TEST(Adjoint, OnesOnAllWhiteMask) {
    const CfaMask h(3, 3, std::vector<Channel>(9, Channel::W));
    const Tensor z = adjoint(Tensor(3, 3, 1, 1.0), h);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(z(i, j, 3), 1.0);
            for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(z(i, j, k), 0.0);
        }
}

TEST(Adjoint, InnerProductIdentityOnRandomMasks) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dim(1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = dim(rng), n = dim(rng);
        const CfaMask h = random_mask(m, n, rng);
        const Tensor x = random_tensor(m, n, 4, rng);
        const Tensor y = random_tensor(m, n, 1, rng);
        const double lhs = inner_product(forward(x, h), y);
        const double rhs = inner_product(x, adjoint(y, h));
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Forward, IsLinear) {
    std::mt19937_64 rng(4);
    const CfaMask h = expand_mask(patterns::sony(), 9, 7);
    const Tensor a = random_tensor(9, 7, 4, rng), b = random_tensor(9, 7, 4, rng);
    Tensor combo = a;
    for (std::size_t n = 0; n < combo.size(); ++n) combo.values()[n] = 2.5 * a.values()[n] - b.values()[n];
    const Tensor ya = forward(a, h), yb = forward(b, h), yc = forward(combo, h);
    for (std::size_t n = 0; n < yc.size(); ++n)
        EXPECT_NEAR(yc.values()[n], 2.5 * ya.values()[n] - yb.values()[n], 1e-14);
}

TEST(AddNoise, ZeroStdIsIdentity) {
    std::mt19937_64 rng(1);
    const RawImage y(random_tensor(8, 8, 1, rng));
    EXPECT_EQ(add_noise(y, {0.0, 42}), y);
}

TEST(AddNoise, SameSeedSameNoise) {
    const RawImage y(16, 16, 0.5);
    EXPECT_EQ(add_noise(y, {0.05, 7}), add_noise(y, {0.05, 7}));
    EXPECT_FALSE(add_noise(y, {0.05, 7}) == add_noise(y, {0.05, 8}));
}

TEST(AddNoise, EmpiricalStdMatches) {
    const RawImage y(256, 256, 0.5);
    const RawImage noisy = add_noise(y, {0.05, 2024});
    double sum = 0.0, sq = 0.0;
    for (double v : noisy.tensor().values()) {
        sum += v - 0.5;
        sq += (v - 0.5) * (v - 0.5);
    }
    const double n = 256.0 * 256.0;
    const double mean = sum / n;
    EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 0.05, 0.003);
}

TEST(AddNoise, DoesNotClip) {
    const RawImage noisy = add_noise(RawImage(64, 64, 0.0), {0.05, 3});
    double lo = 0.0;
    for (double v : noisy.tensor().values()) lo = std::min(lo, v);
    EXPECT_LT(lo, 0.0);
}

TEST(AddNoise, RejectsNegativeStd) {
    EXPECT_THROW(add_noise(RawImage(2, 2), {-0.1, 0}), InvalidArgument);
}

TEST(DeriveSeed, StreamsDiffer) {
    EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
    EXPECT_NE(derive_seed(0, 0), derive_seed(1, 0));
    EXPECT_EQ(derive_seed(123, 4), derive_seed(123, 4));
}
