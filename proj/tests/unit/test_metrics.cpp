#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dctmark/metrics.hpp"
#include "test_support.hpp"

using namespace dctmark;

TEST(Mse, IdenticalIsZero) {
    const ImageBuffer a = testing_support::random_image(9, 7, 3, 1);
    EXPECT_EQ(mse(a, a), 0.0);
    EXPECT_TRUE(psnr(a, a).is_infinite());
    EXPECT_EQ(psnr(a, a).to_string(), "inf");
}

TEST(Mse, OneSampleOf255InTwoByTwoRgb) {
    ImageBuffer a(2, 2, 3, 0), b(2, 2, 3, 0);
    b.at(1, 0, 2) = 255;
    EXPECT_DOUBLE_EQ(mse(a, b), 5418.75);
    EXPECT_EQ(psnr(a, b).to_string(), "10.79");
}

TEST(Mse, UniformOffsetOfOne) {
    ImageBuffer a = testing_support::random_image(16, 16, 3, 2);
    for (auto& s : a.samples()) s = static_cast<std::uint8_t>(std::min<int>(s, 254));
    ImageBuffer b = a;
    for (auto& s : b.samples()) ++s;
    EXPECT_EQ(mse(a, b), 1.0);
    EXPECT_EQ(psnr(a, b).to_string(), "48.13");
}

TEST(Mse, GrayCountsOneChannel) {
    ImageBuffer a(2, 2, 1, 0), b(2, 2, 1, 0);
    b.at(0, 0) = 2;
    EXPECT_DOUBLE_EQ(mse(a, b), 1.0);
}

TEST(Mse, ShapeMismatch) {
    EXPECT_THROW(mse(ImageBuffer(2, 2, 3), ImageBuffer(2, 2, 1)), DimensionError);
    EXPECT_THROW(mse(ImageBuffer(2, 2, 3), ImageBuffer(3, 2, 3)), DimensionError);
}

TEST(Psnr, FromMse) {
    EXPECT_NEAR(psnr_from_mse(5418.75).db(), 10.0 * std::log10(65025.0 / 5418.75), 1e-12);
    EXPECT_NEAR(psnr_from_mse(65025.0).db(), 0.0, 1e-12);
    EXPECT_TRUE(psnr_from_mse(0.0).is_infinite());
    EXPECT_NEAR(psnr_from_mse(1.0, 16).db(), 20.0 * std::log10(65535.0), 1e-9);
    EXPECT_THROW(psnr_from_mse(1.0, 0), ConfigError);
}

TEST(Psnr, Ordering) {
    EXPECT_TRUE(Psnr::finite(30.0) < Psnr::finite(31.0));
    EXPECT_TRUE(Psnr::finite(1e9) < Psnr::infinite());
    EXPECT_FALSE(Psnr::infinite() < Psnr::infinite());
    EXPECT_FALSE(Psnr::infinite() < Psnr::finite(5.0));
}

TEST(MetricProperties, SymmetryAndMonotonicity) {
    std::mt19937 rng(3);
    for (int n = 0; n < 20; ++n) {
        const ImageBuffer a = testing_support::random_image(8, 8, 3, rng());
        const ImageBuffer b = testing_support::random_image(8, 8, 3, rng());
        EXPECT_EQ(mse(a, b), mse(b, a));
    }
    double prev = psnr_from_mse(0.01).db();
    for (double m = 0.02; m < 70000; m *= 1.7) {
        const double p = psnr_from_mse(m).db();
        ASSERT_LT(p, prev);
        prev = p;
    }
}

TEST(MeanDifference, SignedAverage) {
    ImageBuffer a(2, 1, 1, 100), b(2, 1, 1, 100);
    b.at(0, 0) = 104;
    b.at(0, 1) = 98;
    EXPECT_DOUBLE_EQ(mean_signed_difference(a, b), 1.0);
    EXPECT_DOUBLE_EQ(mean_signed_difference(b, a), -1.0);
}
