#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dctmark/blocks.hpp"
#include "dctmark/color.hpp"
#include "dctmark/error.hpp"
#include "dctmark/image.hpp"
#include "dctmark/keystream.hpp"

namespace dctmark {

/// Bit matrix carried 2x2 bits per cover block. Sub-block k (raster order
/// over the watermark's own 2x2 grid) holds w_00(k), w_01(k), w_10(k), w_11(k).
class BinaryWatermark {
public:
    BinaryWatermark() = default;

    BinaryWatermark(int width, int height)
        : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {
        if (width <= 0 || height <= 0) throw DimensionError("watermark dimensions must be positive");
    }

    /// Binarise: luminance >= threshold is 1.
    static BinaryWatermark from_image(const ImageBuffer& img, double threshold = 128.0) {
        const ImagePlane y = luma_plane(img);
        BinaryWatermark wm(img.width(), img.height());
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c) wm.set(r, c, y.at(r, c) >= threshold);
        return wm;
    }

    ImageBuffer to_image() const {
        ImageBuffer img(width_, height_, 1);
        for (int r = 0; r < height_; ++r)
            for (int c = 0; c < width_; ++c) img.at(r, c) = get(r, c) ? 255 : 0;
        return img;
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t bit_count() const noexcept { return bits_.size(); }

    int sub_blocks_x() const noexcept { return (width_ + 1) / 2; }
    int sub_blocks_y() const noexcept { return (height_ + 1) / 2; }
    std::size_t sub_block_count() const noexcept {
        return static_cast<std::size_t>(sub_blocks_x()) * sub_blocks_y();
    }

    bool get(int r, int c) const { return bits_[static_cast<std::size_t>(r) * width_ + c] != 0; }
    void set(int r, int c, bool v) { bits_[static_cast<std::size_t>(r) * width_ + c] = v ? 1 : 0; }

    /// w_ij(k); positions beyond an odd edge read as 0.
    bool sub_block_bit(std::size_t k, int i, int j) const {
        const int r = static_cast<int>(k / sub_blocks_x()) * 2 + i;
        const int c = static_cast<int>(k % sub_blocks_x()) * 2 + j;
        return r < height_ && c < width_ && get(r, c);
    }

    std::vector<std::uint8_t>& bits() noexcept { return bits_; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryWatermark&, const BinaryWatermark&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// XOR every bit with the key's keystream. Self-inverse.
inline BinaryWatermark encrypt_watermark(const BinaryWatermark& wm, const WatermarkKey& key) {
    BinaryWatermark out = wm;
    xor_keystream(out.bits(), key);
    return out;
}

/// Multiplicative strengths: alpha_00 = alpha_dc, alpha_01 = alpha_10 = alpha_11 = alpha_ac.
/// A position is used only when the change it would carry, alpha * |c|, is at
/// least `min_change`. The default is about one JPEG q75 quantizer step for
/// the lowest frequencies; smaller changes are lost to rounding and recompression.
struct AlphaConfig {
    double alpha_dc = 0.02;
    double alpha_ac = 0.1;
    double min_change = 8.0;

    void validate() const {
        if (!(alpha_dc > 0.0 && alpha_dc < 1.0)) throw ConfigError("alpha_dc must lie in (0, 1)");
        if (!(alpha_ac > 0.0 && alpha_ac < 1.0)) throw ConfigError("alpha_ac must lie in (0, 1)");
        if (!(min_change >= 0.0)) throw ConfigError("min_change must be non-negative");
    }

    double at(int i, int j) const noexcept { return i == 0 && j == 0 ? alpha_dc : alpha_ac; }

    bool reliable(double c, int i, int j) const noexcept {
        const double change = std::abs(c) * at(i, j);
        return change > 0.0 && change >= min_change;
    }
};

struct AuthConfig {
    double threshold = 0.85;
    std::size_t min_reliable = 64;

    void validate() const {
        if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
    }
};

enum class Verdict { authentic, not_authentic };

inline std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::authentic ? "authentic" : "not-authentic";
}

struct AuthDecision {
    double match_fraction = 0.0;
    std::size_t reliable_count = 0;
    double threshold = 0.0;
    Verdict verdict = Verdict::not_authentic;
};

/// The four marked positions of every block.
inline constexpr std::array<std::array<int, 2>, 4> kMarkedPositions{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

/// Maximum payload for a width x height cover: 4 bits per 8x8 block.
constexpr std::size_t invisible_capacity_bits(int width, int height) noexcept {
    return 4u * static_cast<std::size_t>(round_up_to_block(width) / kBlockSize) *
           static_cast<std::size_t>(round_up_to_block(height) / kBlockSize);
}

/// Spread the watermark's sub-blocks over the cover's blocks, zero-pad to
/// the cover's capacity and encrypt. Entry 4n + 2i + j is the bit for
/// position (i, j) of cover block n.
inline std::vector<std::uint8_t> encrypted_payload(const BinaryWatermark& wm, const WatermarkKey& key,
                                                   std::size_t block_count) {
    if (wm.sub_block_count() > block_count)
        throw CapacityError(4 * wm.sub_block_count(), 4 * block_count);
    std::vector<std::uint8_t> bits(4 * block_count, 0);
    for (std::size_t k = 0; k < wm.sub_block_count(); ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) bits[4 * k + 2 * i + j] = wm.sub_block_bit(k, i, j) ? 1 : 0;
    xor_keystream(bits, key);
    return bits;
}

/// Apply the multiplicative mark to one coefficient.
constexpr double mark_coefficient(double c, bool bit, double alpha) noexcept {
    return bit ? c * (1.0 + alpha) : c * (1.0 - alpha);
}

/// Read one bit back: 1 when the coefficient's magnitude grew, sign-aware.
constexpr bool read_coefficient(double original, double suspect) noexcept {
    return original >= 0.0 ? suspect > original : suspect < original;
}

/// Invisible embedding into the luminance (Y, or intensity for gray covers).
/// Color covers keep Cb/Cr: the luminance change is added to R, G and B alike.
inline ImageBuffer embed_invisible(const ImageBuffer& cover, const BinaryWatermark& wm, const WatermarkKey& key,
                                   const AlphaConfig& cfg = {}) {
    cfg.validate();
    const ImagePlane y = luma_plane(cover);
    DctGrid grid = plane_to_dct(y);
    const auto payload = encrypted_payload(wm, key, grid.size());

    for (std::size_t n = 0; n < grid.size(); ++n) {
        auto& block = grid.blocks[n];
        for (const auto& [i, j] : kMarkedPositions)
            if (cfg.reliable(block(i, j), i, j))
                block(i, j) = mark_coefficient(block(i, j), payload[4 * n + 2 * i + j] != 0, cfg.at(i, j));
    }
    const ImagePlane marked = dct_to_plane(grid, cover.width(), cover.height());

    ImageBuffer out = cover;
    for (int r = 0; r < cover.height(); ++r)
        for (int c = 0; c < cover.width(); ++c) {
            const double dy = marked.at(r, c) - y.at(r, c);
            for (int ch = 0; ch < cover.channels(); ++ch) out.at(r, c, ch) = to_sample(cover.at(r, c, ch) + dy);
        }
    return out;
}

/// Bits read from a suspect image against the original, one per payload slot.
struct ExtractedBits {
    std::vector<std::uint8_t> bits;
    std::vector<std::uint8_t> reliable;
};

/// Non-blind read-out of every marked position.
inline ExtractedBits extract_bits(const ImageBuffer& suspect, const ImageBuffer& original,
                                  const AlphaConfig& cfg = {}) {
    if (suspect.width() != original.width() || suspect.height() != original.height())
        throw DimensionError("suspect and original differ in size");
    const DctGrid orig = plane_to_dct(luma_plane(original));
    const DctGrid susp = plane_to_dct(luma_plane(suspect));
    ExtractedBits out{std::vector<std::uint8_t>(4 * orig.size(), 0), std::vector<std::uint8_t>(4 * orig.size(), 0)};
    for (std::size_t n = 0; n < orig.size(); ++n)
        for (const auto& [i, j] : kMarkedPositions) {
            const double c = orig.blocks[n](i, j);
            const std::size_t slot = 4 * n + 2 * i + j;
            out.reliable[slot] = cfg.reliable(c, i, j) ? 1 : 0;
            out.bits[slot] = read_coefficient(c, susp.blocks[n](i, j)) ? 1 : 0;
        }
    return out;
}

/// Compare the extracted sequence with the encrypted expected watermark.
inline AuthDecision extract_watermark(const ImageBuffer& suspect, const ImageBuffer& original,
                                      const BinaryWatermark& expected, const WatermarkKey& key,
                                      const AuthConfig& auth = {}, const AlphaConfig& cfg = {}) {
    auth.validate();
    cfg.validate();
    const ExtractedBits got = extract_bits(suspect, original, cfg);
    const auto want = encrypted_payload(expected, key, got.bits.size() / 4);
    std::size_t reliable = 0;
    std::size_t matches = 0;
    for (std::size_t s = 0; s < want.size(); ++s) {
        if (!got.reliable[s]) continue;
        ++reliable;
        if (got.bits[s] == want[s]) ++matches;
    }
    AuthDecision d;
    d.reliable_count = reliable;
    d.threshold = auth.threshold;
    d.match_fraction = reliable ? static_cast<double>(matches) / static_cast<double>(reliable) : 0.0;
    d.verdict = reliable >= auth.min_reliable && d.match_fraction >= auth.threshold ? Verdict::authentic
                                                                                     : Verdict::not_authentic;
    return d;
}

/// Decrypt extracted bits back into a watermark of the given size (for display).
inline BinaryWatermark recover_watermark(const ImageBuffer& suspect, const ImageBuffer& original,
                                         const WatermarkKey& key, int width, int height,
                                         const AlphaConfig& cfg = {}) {
    ExtractedBits got = extract_bits(suspect, original, cfg);
    BinaryWatermark out(width, height);
    if (out.sub_block_count() > got.bits.size() / 4)
        throw CapacityError(4 * out.sub_block_count(), got.bits.size());
    xor_keystream(got.bits, key);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const std::size_t k = static_cast<std::size_t>(r / 2) * out.sub_blocks_x() + c / 2;
            out.set(r, c, got.bits[4 * k + 2 * (r % 2) + c % 2] != 0);
        }
    return out;
}

}  // namespace dctmark
