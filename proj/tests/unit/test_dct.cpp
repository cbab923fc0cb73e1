#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dctmark/dct.hpp"

using namespace dctmark;

namespace {

// Direct quadruple-sum orthonormal DCT-II, no tables shared with the library.
DctBlock oracle_dct(const SpatialBlock& b) {
    DctBlock out;
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (int x = 0; x < 8; ++x)
                for (int y = 0; y < 8; ++y)
                    acc += b(x, y) * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0) *
                           std::cos((2 * y + 1) * v * std::numbers::pi / 16.0);
            const double cu = u == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
            const double cv = v == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
            out(u, v) = 0.25 * cu * cv * acc;
        }
    return out;
}

SpatialBlock random_block(std::mt19937& rng, double lo = 0.0, double hi = 255.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    SpatialBlock b;
    for (auto& x : b.v) x = d(rng);
    return b;
}

}  // namespace

TEST(Dct, ConstantBlockOnlyDc) {
    SpatialBlock b;
    b.v.fill(128.0);
    const DctBlock c = dct2d(b);
    EXPECT_NEAR(c(0, 0), 1024.0, 1e-9);
    for (int k = 1; k < kBlockArea; ++k) EXPECT_NEAR(c.v[k], 0.0, 1e-9);
}

TEST(Dct, ZeroBlock) {
    const DctBlock c = dct2d(SpatialBlock{});
    for (double x : c.v) EXPECT_EQ(x, 0.0);
}

TEST(Dct, MatchesQuadrupleSumOracle) {
    std::mt19937 rng(1);
    for (int n = 0; n < 50; ++n) {
        const SpatialBlock b = random_block(rng);
        const DctBlock got = dct2d(b);
        const DctBlock want = oracle_dct(b);
        for (int k = 0; k < kBlockArea; ++k) EXPECT_NEAR(got.v[k], want.v[k], 1e-9);
    }
}

TEST(Dct, DcIsEightTimesMean) {
    std::mt19937 rng(2);
    const SpatialBlock b = random_block(rng);
    double mean = 0.0;
    for (double x : b.v) mean += x;
    mean /= kBlockArea;
    EXPECT_NEAR(dct2d(b)(0, 0), 8.0 * mean, 1e-9);
}

TEST(Dct, RoundTripAndParseval) {
    std::mt19937 rng(3);
    for (int n = 0; n < 1000; ++n) {
        const SpatialBlock b = random_block(rng, -300.0, 300.0);
        const DctBlock c = dct2d(b);
        const SpatialBlock back = idct2d(c);
        double es = 0.0, ec = 0.0;
        for (int k = 0; k < kBlockArea; ++k) {
            ASSERT_NEAR(back.v[k], b.v[k], 1e-9);
            es += b.v[k] * b.v[k];
            ec += c.v[k] * c.v[k];
        }
        ASSERT_NEAR(ec / es, 1.0, 1e-9);
    }
}

TEST(Dct, Linearity) {
    std::mt19937 rng(4);
    const SpatialBlock a = random_block(rng), b = random_block(rng);
    SpatialBlock sum;
    for (int k = 0; k < kBlockArea; ++k) sum.v[k] = 2.0 * a.v[k] - 0.5 * b.v[k];
    const DctBlock ca = dct2d(a), cb = dct2d(b), cs = dct2d(sum);
    for (int k = 0; k < kBlockArea; ++k) EXPECT_NEAR(cs.v[k], 2.0 * ca.v[k] - 0.5 * cb.v[k], 1e-9);
}

TEST(Dct, SingleBasisFunctionInverts) {
    DctBlock c;
    c(1, 1) = 10.0;
    const SpatialBlock s = idct2d(c);
    const DctBlock again = dct2d(s);
    for (int k = 0; k < kBlockArea; ++k) EXPECT_NEAR(again.v[k], c.v[k], 1e-12);
}
