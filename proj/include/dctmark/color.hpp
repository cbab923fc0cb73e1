#pragma once

#include "dctmark/error.hpp"
#include "dctmark/image.hpp"

namespace dctmark {

// Full-range BT.601 (JPEG/JFIF) coefficients.
namespace bt601 {
inline constexpr double kr = 0.299;
inline constexpr double kg = 0.587;
inline constexpr double kb = 0.114;
inline constexpr double chroma_offset = 128.0;
}  // namespace bt601

struct YCbCrPlanes {
    ImagePlane y;
    ImagePlane cb;
    ImagePlane cr;
};

struct YCbCr {
    double y, cb, cr;
};

struct Rgb {
    double r, g, b;
};

constexpr YCbCr rgb_to_ycbcr(double r, double g, double b) noexcept {
    return {bt601::kr * r + bt601::kg * g + bt601::kb * b,
            bt601::chroma_offset - 0.168736 * r - 0.331264 * g + 0.5 * b,
            bt601::chroma_offset + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

constexpr Rgb ycbcr_to_rgb(double y, double cb, double cr) noexcept {
    const double u = cb - bt601::chroma_offset;
    const double v = cr - bt601::chroma_offset;
    return {y + 1.402 * v, y - 0.344136 * u - 0.714136 * v, y + 1.772 * u};
}

/// Split an RGB image into unclamped real Y, Cb, Cr planes.
inline YCbCrPlanes rgb_to_ycbcr(const ImageBuffer& img) {
    if (img.is_gray()) throw GrayInputError();
    YCbCrPlanes out{ImagePlane(img.width(), img.height()), ImagePlane(img.width(), img.height()),
                    ImagePlane(img.width(), img.height())};
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const auto px = rgb_to_ycbcr(img.at(r, c, 0), img.at(r, c, 1), img.at(r, c, 2));
            out.y.at(r, c) = px.y;
            out.cb.at(r, c) = px.cb;
            out.cr.at(r, c) = px.cr;
        }
    }
    return out;
}

/// Inverse conversion; samples are rounded half-up and clamped to [0,255].
inline ImageBuffer ycbcr_to_rgb(const ImagePlane& y, const ImagePlane& cb, const ImagePlane& cr) {
    if (!y.same_size(cb) || !y.same_size(cr)) throw DimensionError("Y/Cb/Cr planes differ in size");
    ImageBuffer out(y.width(), y.height(), 3);
    for (int r = 0; r < y.height(); ++r) {
        for (int c = 0; c < y.width(); ++c) {
            const auto px = ycbcr_to_rgb(y.at(r, c), cb.at(r, c), cr.at(r, c));
            out.at(r, c, 0) = to_sample(px.r);
            out.at(r, c, 1) = to_sample(px.g);
            out.at(r, c, 2) = to_sample(px.b);
        }
    }
    return out;
}

/// Luminance of an image: the intensity channel of a gray image, Y of a color one.
inline ImagePlane luma_plane(const ImageBuffer& img) {
    return img.is_gray() ? channel_plane(img, 0) : rgb_to_ycbcr(img).y;
}

/// 8-bit gray version of an image (identity copy for gray input).
inline ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.is_gray()) return img;
    ImageBuffer out(img.width(), img.height(), 1);
    store_channel(out, 0, luma_plane(img));
    return out;
}

/// Replicate a gray image into three identical channels.
inline ImageBuffer gray_to_rgb(const ImageBuffer& img) {
    if (!img.is_gray()) return img;
    ImageBuffer out(img.width(), img.height(), 3);
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(r, c);
    return out;
}

}  // namespace dctmark
