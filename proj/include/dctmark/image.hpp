#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dctmark/error.hpp"

namespace dctmark {

/// Round half-up and clamp into the 8-bit sample range.
inline std::uint8_t to_sample(double v) {
    const double r = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

/// 8-bit raster, row-major, channel-interleaved. One channel (gray) or three (RGB).
class ImageBuffer {
public:
    ImageBuffer() = default;

    ImageBuffer(int width, int height, int channels, std::uint8_t fill = 0)
        : width_(width), height_(height), channels_(channels) {
        validate_shape(width, height, channels);
        samples_.assign(static_cast<std::size_t>(width) * height * channels, fill);
    }

    ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> samples)
        : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
        validate_shape(width, height, channels);
        if (samples_.size() != static_cast<std::size_t>(width) * height * channels) {
            throw DimensionError("sample count does not match " + std::to_string(width) + "x" +
                                 std::to_string(height) + "x" + std::to_string(channels));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool is_gray() const noexcept { return channels_ == 1; }
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

    std::uint8_t& at(int row, int col, int ch = 0) { return samples_[index(row, col, ch)]; }
    std::uint8_t at(int row, int col, int ch = 0) const { return samples_[index(row, col, ch)]; }

    std::span<std::uint8_t> samples() noexcept { return samples_; }
    std::span<const std::uint8_t> samples() const noexcept { return samples_; }

    bool same_shape(const ImageBuffer& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    static void validate_shape(int width, int height, int channels) {
        if (width <= 0 || height <= 0) throw DimensionError("image dimensions must be positive");
        if (channels != 1 && channels != 3) throw DimensionError("image must have 1 or 3 channels");
    }

    std::size_t index(int row, int col, int ch) const noexcept {
        return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::uint8_t> samples_;
};

/// Single real-valued channel (an RGB component, Y, Cb or Cr).
class ImagePlane {
public:
    ImagePlane() = default;

    ImagePlane(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          samples_(static_cast<std::size_t>(width) * height, fill) {
        if (width <= 0 || height <= 0) throw DimensionError("plane dimensions must be positive");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double& at(int row, int col) { return samples_[static_cast<std::size_t>(row) * width_ + col]; }
    double at(int row, int col) const {
        return samples_[static_cast<std::size_t>(row) * width_ + col];
    }

    std::span<double> samples() noexcept { return samples_; }
    std::span<const double> samples() const noexcept { return samples_; }

    bool same_size(const ImagePlane& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

/// Copy one channel of an 8-bit image into a real plane.
inline ImagePlane channel_plane(const ImageBuffer& img, int ch) {
    if (ch < 0 || ch >= img.channels()) throw DimensionError("channel index out of range");
    ImagePlane p(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) p.at(r, c) = img.at(r, c, ch);
    return p;
}

/// Write a plane back into one channel, rounding half-up and clamping.
inline void store_channel(ImageBuffer& img, int ch, const ImagePlane& p) {
    if (p.width() < img.width() || p.height() < img.height())
        throw DimensionError("plane smaller than target image");
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) img.at(r, c, ch) = to_sample(p.at(r, c));
}

/// Top-left rows x cols window of a plane.
inline ImagePlane crop_plane(const ImagePlane& p, int width, int height) {
    if (width > p.width() || height > p.height()) throw DimensionError("crop exceeds plane");
    ImagePlane out(width, height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) out.at(r, c) = p.at(r, c);
    return out;
}

}  // namespace dctmark
