#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace rgbw;
using namespace rgbw::testing;

namespace {

SpectralImage colour_scene(std::size_t rows, std::size_t cols, double r, double g, double b) {
    Tensor t(rows, cols, 3);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            t(i, j, 0) = r;
            t(i, j, 1) = g;
            t(i, j, 2) = b;
        }
    return synthesize_white(RgbImage(std::move(t)));
}

}  // namespace

TEST(InterpolationKernel, TentWeights) {
    const auto w = InterpolationKernel::tent(1).weights();
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0], 0.5);
    EXPECT_EQ(w[1], 1.0);
    EXPECT_EQ(w[2], 0.5);
    EXPECT_EQ(InterpolationKernel::for_pattern(patterns::kodak()).radius, 4);
}

TEST(InterpolationKernel, RejectsBadParameters) {
    EXPECT_THROW(InterpolationKernel::tent(0).weights(), InvalidArgument);
    EXPECT_THROW(InterpolationKernel::gaussian(2, 0.0).weights(), InvalidArgument);
}

TEST(InterpolateSparse, FullSupportIsIdentity) {
    std::mt19937_64 rng(1);
    const Tensor y = random_tensor(9, 11, 1, rng);
    for (const auto& k : {InterpolationKernel::tent(3), InterpolationKernel::gaussian(2, 1.5)})
        EXPECT_LT(max_abs_diff(interpolate_sparse(y, Tensor(9, 11, 1, 1.0), k), y), 1e-12);
}

TEST(InterpolateSparse, ConstantsArePreserved) {
    std::mt19937_64 rng(2);
    std::bernoulli_distribution coin(0.2);
    Tensor support(20, 17, 1);
    for (double& v : support.values()) v = coin(rng) ? 1.0 : 0.0;
    support(0, 0, 0) = 1.0;
    const Tensor out = interpolate_sparse(Tensor(20, 17, 1, 0.37), support, InterpolationKernel::tent(2));
    for (double v : out.values()) EXPECT_NEAR(v, 0.37, 1e-12);
}

TEST(InterpolateSparse, LinearRampOnEvenSamples) {
    Tensor y(1, 9, 1), support(1, 9, 1);
    for (std::size_t j = 0; j < 9; ++j) {
        y(0, j, 0) = 0.5 + 0.25 * j;
        support(0, j, 0) = j % 2 == 0 ? 1.0 : 0.0;
    }
    const Tensor out = interpolate_sparse(y, support, InterpolationKernel::tent(1));
    for (std::size_t j = 1; j < 9; j += 2) EXPECT_NEAR(out(0, j, 0), 0.5 + 0.25 * j, 1e-15);
}

TEST(InterpolateSparse, HolesTakeNearestSample) {
    Tensor y(1, 10, 1, 0.0), support(1, 10, 1, 0.0);
    y(0, 0, 0) = 0.2;
    support(0, 0, 0) = 1.0;
    y(0, 9, 0) = 0.8;
    support(0, 9, 0) = 1.0;
    const Tensor out = interpolate_sparse(y, support, InterpolationKernel::tent(1));
    EXPECT_EQ(out(0, 3, 0), 0.2);
    EXPECT_EQ(out(0, 6, 0), 0.8);
    EXPECT_TRUE(out.all_finite());
}

TEST(InterpolateSparse, EmptySupportIsAnError) {
    EXPECT_THROW(interpolate_sparse(Tensor(3, 3, 1), Tensor(3, 3, 1), InterpolationKernel::tent(1)), InvalidArgument);
}

TEST(BaselineDemosaic, ConstantGreySceneIsExact) {
    for (const CfaPattern& p : rgbw_patterns())
        for (double c : {0.01, 0.2, 0.5, 1.0}) {
            const RawImage y = forward(SpectralImage(Tensor(32, 32, 4, c)), expand_mask(p, 32, 32));
            const RgbImage out = baseline_demosaic(y, p);
            for (double v : out.tensor().values()) EXPECT_NEAR(v, c, 1e-9) << p.name();
        }
}

TEST(BaselineDemosaic, ConstantColourSceneAwayFromBorders) {
    const SpectralImage scene = colour_scene(64, 64, 0.4, 0.2, 0.2);
    for (const CfaPattern& p : rgbw_patterns()) {
        const RgbImage out = baseline_demosaic(forward(scene, expand_mask(p, 64, 64)), p);
        for (std::size_t i = 8; i < 56; ++i)
            for (std::size_t j = 8; j < 56; ++j)
                for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(out(i, j, k), scene(i, j, k), 0.05 * scene(i, j, k));
    }
}

TEST(BaselineDemosaic, SmoothSceneWithinFivePercent) {
    Tensor rgb(64, 64, 3);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) {
            rgb(i, j, 0) = 0.4 + 0.1 * std::sin(j / 20.0);
            rgb(i, j, 1) = 0.2 + 0.05 * std::cos(i / 25.0);
            rgb(i, j, 2) = 0.2 + 0.002 * (i + j);
        }
    const SpectralImage scene = synthesize_white(RgbImage(std::move(rgb)));
    for (const CfaPattern& p : rgbw_patterns()) {
        const RgbImage out = baseline_demosaic(forward(scene, expand_mask(p, 64, 64)), p);
        for (std::size_t i = 8; i < 56; ++i)
            for (std::size_t j = 8; j < 56; ++j)
                for (std::size_t k = 0; k < 3; ++k)
                    EXPECT_NEAR(out(i, j, k), scene(i, j, k), 0.05 * scene(i, j, k)) << p.name();
    }
}

TEST(BaselineDemosaic, NoisyDarkInputStaysFinite) {
    const CfaPattern p = patterns::sparse3();
    const RawImage y = add_noise(forward(SpectralImage(Tensor(32, 32, 4, 0.0)), expand_mask(p, 32, 32)), {0.05, 9});
    EXPECT_TRUE(baseline_demosaic(y, p).tensor().all_finite());
}

TEST(BaselineDemosaic, RequiresAllFourFilters) {
    EXPECT_THROW(baseline_demosaic(RawImage(4, 4), patterns::bayer()), InvalidArgument);
    EXPECT_THROW(baseline_demosaic(RawImage(4, 4), patterns::kodak(), InterpolationKernel::tent(1), 0.0),
                 InvalidArgument);
}
