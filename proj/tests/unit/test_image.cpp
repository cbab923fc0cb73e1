#include <gtest/gtest.h>

#include "dctmark/image.hpp"

using namespace dctmark;

TEST(ToSample, RoundsHalfUp) {
    EXPECT_EQ(to_sample(2.5), 3);
    EXPECT_EQ(to_sample(2.4999), 2);
    EXPECT_EQ(to_sample(-0.4), 0);
    EXPECT_EQ(to_sample(127.5), 128);
}

TEST(ToSample, Clamps) {
    EXPECT_EQ(to_sample(-20.0), 0);
    EXPECT_EQ(to_sample(255.6), 255);
    EXPECT_EQ(to_sample(300.0), 255);
}

TEST(ImageBuffer, ShapeAndFill) {
    ImageBuffer img(4, 2, 3, 7);
    EXPECT_EQ(img.width(), 4);
    EXPECT_EQ(img.height(), 2);
    EXPECT_EQ(img.channels(), 3);
    EXPECT_EQ(img.samples().size(), 24u);
    EXPECT_EQ(img.at(1, 3, 2), 7);
    EXPECT_FALSE(img.is_gray());
}

TEST(ImageBuffer, RowMajorInterleaved) {
    ImageBuffer img(3, 2, 3);
    img.at(1, 2, 1) = 99;
    EXPECT_EQ(img.samples()[(1 * 3 + 2) * 3 + 1], 99);
}

TEST(ImageBuffer, RejectsBadShapes) {
    EXPECT_THROW(ImageBuffer(0, 4, 3), DimensionError);
    EXPECT_THROW(ImageBuffer(4, -1, 1), DimensionError);
    EXPECT_THROW(ImageBuffer(4, 4, 2), DimensionError);
    EXPECT_THROW(ImageBuffer(4, 4, 4), DimensionError);
    EXPECT_THROW(ImageBuffer(2, 2, 3, std::vector<std::uint8_t>(11)), DimensionError);
}

TEST(ImagePlane, ChannelRoundTrip) {
    ImageBuffer img(5, 3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 5; ++c)
            for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = static_cast<std::uint8_t>(r * 50 + c * 10 + ch);
    ImageBuffer copy(5, 3, 3);
    for (int ch = 0; ch < 3; ++ch) store_channel(copy, ch, channel_plane(img, ch));
    EXPECT_EQ(copy, img);
}

TEST(ImagePlane, StoreChannelRoundsAndClamps) {
    ImagePlane p(2, 1);
    p.at(0, 0) = 10.5;
    p.at(0, 1) = 400.0;
    ImageBuffer img(2, 1, 1);
    store_channel(img, 0, p);
    EXPECT_EQ(img.at(0, 0), 11);
    EXPECT_EQ(img.at(0, 1), 255);
}

TEST(ImagePlane, CropKeepsTopLeft) {
    ImagePlane p(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) p.at(r, c) = r * 4 + c;
    const ImagePlane q = crop_plane(p, 2, 3);
    EXPECT_EQ(q.width(), 2);
    EXPECT_EQ(q.height(), 3);
    EXPECT_EQ(q.at(2, 1), 9.0);
    EXPECT_THROW(crop_plane(p, 5, 1), DimensionError);
}

TEST(ImagePlane, ChannelIndexChecked) {
    ImageBuffer img(2, 2, 1);
    EXPECT_THROW(channel_plane(img, 1), DimensionError);
}
