#include <cmath>

#include <gtest/gtest.h>

#include "dctmark/dctmark.hpp"
#include "test_support.hpp"

using namespace dctmark;

namespace {

// Corner-aligned bilinear interpolation written from its definition.
double bilinear_oracle(const ImageBuffer& src, int w, int h, int r, int c, int ch) {
    const double fy = h > 1 ? r * (src.height() - 1.0) / (h - 1.0) : 0.0;
    const double fx = w > 1 ? c * (src.width() - 1.0) / (w - 1.0) : 0.0;
    const int y0 = static_cast<int>(std::floor(fy)), x0 = static_cast<int>(std::floor(fx));
    const int y1 = std::min(y0 + 1, src.height() - 1), x1 = std::min(x0 + 1, src.width() - 1);
    const double ty = fy - y0, tx = fx - x0;
    return (1 - ty) * ((1 - tx) * src.at(y0, x0, ch) + tx * src.at(y0, x1, ch)) +
           ty * ((1 - tx) * src.at(y1, x0, ch) + tx * src.at(y1, x1, ch));
}

ImageBuffer checker(int w, int h, int ch) {
    ImageBuffer img(w, h, ch);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int k = 0; k < ch; ++k) img.at(r, c, k) = ((r / 4 + c / 4) % 2) ? 230 : 20;
    return img;
}

}  // namespace

TEST(Anchor, ParsesVariants) {
    EXPECT_EQ(parse_anchor("middle-center"), Anchor::middle_center);
    EXPECT_EQ(parse_anchor("Middle Center"), Anchor::middle_center);
    EXPECT_EQ(parse_anchor("bottom_right"), Anchor::bottom_right);
    EXPECT_EQ(parse_anchor("top-centre"), Anchor::top_center);
    EXPECT_FALSE(parse_anchor("somewhere").has_value());
    for (std::size_t i = 0; i < kAnchorNames.size(); ++i)
        EXPECT_EQ(to_string(*parse_anchor(kAnchorNames[i])), kAnchorNames[i]);
}

TEST(Resize, TwoByTwoToFourByFourMatchesOracle) {
    ImageBuffer src(2, 2, 1);
    src.at(0, 0) = 0;
    src.at(0, 1) = 90;
    src.at(1, 0) = 180;
    src.at(1, 1) = 255;
    const ImageBuffer out = resize_bilinear(src, 4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) EXPECT_EQ(out.at(r, c), to_sample(bilinear_oracle(src, 4, 4, r, c, 0)));
    EXPECT_EQ(out.at(0, 0), 0);
    EXPECT_EQ(out.at(0, 3), 90);
    EXPECT_EQ(out.at(3, 0), 180);
    EXPECT_EQ(out.at(3, 3), 255);
    EXPECT_EQ(out.at(0, 1), 30);
}

TEST(Resize, RandomDownAndUpMatchOracle) {
    const ImageBuffer src = testing_support::random_image(13, 9, 3, 21);
    for (auto [w, h] : {std::pair{7, 5}, std::pair{29, 17}, std::pair{1, 1}, std::pair{13, 1}}) {
        const ImageBuffer out = resize_bilinear(src, w, h);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                for (int ch = 0; ch < 3; ++ch)
                    // Exact ties may round either way between two float evaluation orders.
                    ASSERT_NEAR(out.at(r, c, ch), bilinear_oracle(src, w, h, r, c, ch), 0.5 + 1e-9);
    }
}

TEST(Resize, SameSizeIsIdentity) {
    const ImageBuffer src = testing_support::random_image(10, 6, 1, 2);
    EXPECT_EQ(resize_bilinear(src, 10, 6), src);
}

TEST(Placement, FitsInsideCover) {
    EXPECT_EQ(fitted_size(100, 100, 512, 512), (std::pair{100, 100}));
    EXPECT_EQ(fitted_size(200, 100, 100, 100), (std::pair{100, 50}));
    PlacementSpec spec{Anchor::middle_center, 600, 300, 10};
    const ImageBuffer wm = resize_watermark(ImageBuffer(60, 30, 3), spec, 512, 512);
    EXPECT_LE(wm.width(), 512);
    EXPECT_EQ(wm.width(), 512);
    EXPECT_EQ(wm.height(), 256);
}

TEST(Placement, OffsetsAreBlockAligned) {
    EXPECT_EQ(align_position(Anchor::middle_center, 512, 512, 100, 100), (Offset{200, 200}));
    EXPECT_EQ(align_position(Anchor::top_left, 512, 512, 100, 100), (Offset{0, 0}));
    EXPECT_EQ(align_position(Anchor::bottom_right, 512, 512, 100, 100), (Offset{408, 408}));
    EXPECT_EQ(align_position(Anchor::top_right, 500, 300, 100, 50), (Offset{0, 400}));
    for (int a = 0; a < 9; ++a) {
        const Offset o = align_position(static_cast<Anchor>(a), 517, 389, 123, 77);
        EXPECT_EQ(o.row % 8, 0);
        EXPECT_EQ(o.col % 8, 0);
        EXPECT_LE(o.row + 77, 389);
        EXPECT_LE(o.col + 123, 517);
    }
    EXPECT_THROW(align_position(Anchor::top_left, 10, 10, 11, 5), DimensionError);
}

TEST(Placement, ComponentPlans) {
    EXPECT_EQ(plan_components(ImageBuffer(8, 8, 3), ImageBuffer(8, 8, 3)), ComponentPlan::color_on_color);
    EXPECT_EQ(plan_components(ImageBuffer(8, 8, 3), ImageBuffer(8, 8, 1)), ComponentPlan::gray_on_color);
    EXPECT_EQ(plan_components(ImageBuffer(8, 8, 1), ImageBuffer(8, 8, 1)), ComponentPlan::gray_on_gray);
    EXPECT_EQ(plan_components(ImageBuffer(8, 8, 1), ImageBuffer(8, 8, 3)), ComponentPlan::gray_on_gray);
}

TEST(Placement, IntensityValidation) {
    EXPECT_THROW((PlacementSpec{Anchor::top_left, 10, 10, 0}.validate()), ConfigError);
    EXPECT_THROW((PlacementSpec{Anchor::top_left, 10, 10, 101}.validate()), ConfigError);
    EXPECT_THROW((PlacementSpec{Anchor::top_left, 0, 10, 10}.validate()), ConfigError);
    EXPECT_NO_THROW((PlacementSpec{Anchor::top_left, 10, 10, 3}.validate()));
}

TEST(Fusion, IntensityMapping) {
    const FactorConfig base;
    EXPECT_DOUBLE_EQ(intensity_config(base, 100).beta_max, 0.17);
    EXPECT_NEAR(intensity_config(base, 10).beta_max, 0.05 + 0.012, 1e-12);
    EXPECT_EQ(intensity_config(base, 10).alpha_min, base.alpha_min);
}

TEST(Fusion, EdgeBlockDcExample) {
    DctBlock c, w;
    c(0, 0) = 800;
    w(0, 0) = 400;
    const DctBlock out = fuse_block(c, w, EmbedFactors{0.98, 0.05});
    EXPECT_NEAR(out(0, 0), 804.0, 1e-12);
}

TEST(Fusion, ZeroBetaOnlyScales) {
    DctBlock c, w;
    for (int k = 0; k < 64; ++k) {
        c.v[k] = k;
        w.v[k] = 1000 - k;
    }
    const DctBlock out = fuse_block(c, w, EmbedFactors{0.9, 0.0});
    for (int k = 0; k < 64; ++k) EXPECT_DOUBLE_EQ(out.v[k], 0.9 * k);
}

TEST(EmbedVisible, KeepsSizeAndOutsideFootprint) {
    const ImageBuffer cover = testing_support::textured_image(100, 70, 1);
    const ImageBuffer wm = checker(30, 20, 3);
    const PlacementSpec spec{Anchor::middle_center, 30, 20, 50};
    const ImageBuffer out = embed_visible(cover, wm, spec);
    ASSERT_TRUE(out.same_shape(cover));
    const Offset at = align_position(spec.anchor, 100, 70, 30, 20);
    const int r1 = at.row + round_up_to_block(20), c1 = at.col + round_up_to_block(30);
    bool inside_changed = false;
    for (int r = 0; r < 70; ++r)
        for (int c = 0; c < 100; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                const bool inside = r >= at.row && r < r1 && c >= at.col && c < c1;
                if (!inside) ASSERT_EQ(out.at(r, c, ch), cover.at(r, c, ch));
                else inside_changed |= out.at(r, c, ch) != cover.at(r, c, ch);
            }
    EXPECT_TRUE(inside_changed);
}

TEST(EmbedVisible, UnitAlphaZeroBetaPreservesCover) {
    const ImageBuffer cover = testing_support::textured_image(64, 48, 2);
    const FactorConfig identity{1.0, 1.0, 0.0, 0.0};
    const ImageBuffer out = embed_visible(cover, checker(16, 16, 3), {Anchor::top_left, 16, 16, 100}, identity);
    for (std::size_t k = 0; k < cover.samples().size(); ++k)
        ASSERT_LE(std::abs(out.samples()[k] - cover.samples()[k]), 1);
}

TEST(EmbedVisible, GrayWatermarkOnColorLeavesChromaNearlyAlone) {
    const ImageBuffer cover = testing_support::textured_image(64, 64, 3);
    const ImageBuffer wm = checker(32, 32, 1);
    const ImageBuffer out = embed_visible(cover, wm, {Anchor::middle_center, 32, 32, 100});
    const auto a = rgb_to_ycbcr(cover), b = rgb_to_ycbcr(out);
    double worst_chroma = 0.0, worst_luma = 0.0;
    for (std::size_t k = 0; k < a.cb.samples().size(); ++k) {
        worst_chroma = std::max({worst_chroma, std::abs(a.cb.samples()[k] - b.cb.samples()[k]),
                                 std::abs(a.cr.samples()[k] - b.cr.samples()[k])});
        worst_luma = std::max(worst_luma, std::abs(a.y.samples()[k] - b.y.samples()[k]));
    }
    EXPECT_GT(worst_luma, 5.0);
    // Only 8-bit rounding of R, G, B perturbs the chroma.
    EXPECT_LT(worst_chroma, 1.5);
}

TEST(EmbedVisible, GrayCover) {
    const ImageBuffer cover = to_gray(testing_support::textured_image(40, 40, 4));
    const ImageBuffer out = embed_visible(cover, checker(16, 16, 3), {Anchor::bottom_left, 16, 16, 30});
    EXPECT_EQ(out.channels(), 1);
    EXPECT_NE(out, cover);
}

TEST(EmbedVisible, Deterministic) {
    const ImageBuffer cover = testing_support::textured_image(48, 40, 5);
    const PlacementSpec spec{Anchor::top_right, 24, 16, 20};
    EXPECT_EQ(embed_visible(cover, checker(24, 16, 3), spec), embed_visible(cover, checker(24, 16, 3), spec));
}

TEST(EmbedVisible, PsnrNonIncreasingInIntensity) {
    const ImageBuffer logo = load_image(testing_support::data_path("logo_100x100.png"));
    for (const char* name : {"lena", "mandril"}) {
        const ImageBuffer cover = testing_support::benchmark(name);
        Psnr prev = Psnr::infinite();
        for (int i : {1, 3, 10, 20, 50, 100}) {
            const Psnr p = psnr(cover, embed_visible(cover, logo, {Anchor::middle_center, 100, 100, i}));
            EXPECT_FALSE(prev < p) << name << " intensity " << i;
            prev = p;
        }
    }
}
