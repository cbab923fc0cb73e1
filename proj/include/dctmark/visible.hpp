#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dctmark/blocks.hpp"
#include "dctmark/color.hpp"
#include "dctmark/error.hpp"
#include "dctmark/hvs.hpp"
#include "dctmark/image.hpp"

namespace dctmark {

enum class Anchor {
    top_left, top_center, top_right,
    middle_left, middle_center, middle_right,
    bottom_left, bottom_center, bottom_right,
};

inline constexpr std::array<std::string_view, 9> kAnchorNames{
    "top-left",    "top-center",    "top-right",
    "middle-left", "middle-center", "middle-right",
    "bottom-left", "bottom-center", "bottom-right",
};

inline std::string_view to_string(Anchor a) noexcept { return kAnchorNames[static_cast<int>(a)]; }

/// Accepts "middle-center", "Middle Center", "middle_centre", "MiddleCenter".
inline std::optional<Anchor> parse_anchor(std::string_view name) {
    std::string key;
    for (char ch : name)
        if (std::isalpha(static_cast<unsigned char>(ch))) key += static_cast<char>(std::tolower(ch));
    if (key.ends_with("centre")) key.replace(key.size() - 6, 6, "center");
    for (std::size_t i = 0; i < kAnchorNames.size(); ++i) {
        std::string candidate;
        for (char ch : kAnchorNames[i])
            if (ch != '-') candidate += ch;
        if (candidate == key) return static_cast<Anchor>(i);
    }
    return std::nullopt;
}

inline constexpr int kMinIntensity = 1;
inline constexpr int kMaxIntensity = 100;

struct PlacementSpec {
    Anchor anchor = Anchor::middle_center;
    int target_width = 0;
    int target_height = 0;
    int intensity = 10;

    void validate() const {
        if (target_width <= 0 || target_height <= 0)
            throw ConfigError("watermark target size must be positive");
        if (intensity < kMinIntensity || intensity > kMaxIntensity)
            throw ConfigError("intensity must lie in [" + std::to_string(kMinIntensity) + ", " +
                              std::to_string(kMaxIntensity) + "]");
    }
};

struct Offset {
    int row = 0;
    int col = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

enum class ComponentPlan {
    gray_on_gray,    ///< intensity plane only (a color watermark is grayed first)
    color_on_color,  ///< R, G and B embedded independently
    gray_on_color,   ///< Y plane of the cover; Cb and Cr pass through
};

inline std::string_view to_string(ComponentPlan p) noexcept {
    switch (p) {
        case ComponentPlan::gray_on_gray: return "gray-on-gray";
        case ComponentPlan::color_on_color: return "color-on-color";
        case ComponentPlan::gray_on_color: return "gray-on-color";
    }
    return "?";
}

/// Bilinear resample with corner-aligned sampling: output corners equal input corners.
inline ImageBuffer resize_bilinear(const ImageBuffer& src, int width, int height) {
    if (width <= 0 || height <= 0) throw DimensionError("resize target must be positive");
    if (width == src.width() && height == src.height()) return src;
    ImageBuffer out(width, height, src.channels());
    const auto scale = [](int dst_n, int src_n) {
        return dst_n > 1 ? static_cast<double>(src_n - 1) / (dst_n - 1) : 0.0;
    };
    const double sy = scale(height, src.height());
    const double sx = scale(width, src.width());
    for (int r = 0; r < height; ++r) {
        const double fy = r * sy;
        const int y0 = std::min(static_cast<int>(fy), src.height() - 1);
        const int y1 = std::min(y0 + 1, src.height() - 1);
        const double wy = fy - y0;
        for (int c = 0; c < width; ++c) {
            const double fx = c * sx;
            const int x0 = std::min(static_cast<int>(fx), src.width() - 1);
            const int x1 = std::min(x0 + 1, src.width() - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < src.channels(); ++ch) {
                const double top = src.at(y0, x0, ch) * (1 - wx) + src.at(y0, x1, ch) * wx;
                const double bottom = src.at(y1, x0, ch) * (1 - wx) + src.at(y1, x1, ch) * wx;
                out.at(r, c, ch) = to_sample(top * (1 - wy) + bottom * wy);
            }
        }
    }
    return out;
}

/// Target size after fitting inside the cover with the aspect ratio kept.
inline std::pair<int, int> fitted_size(int target_w, int target_h, int cover_w, int cover_h) {
    if (target_w <= cover_w && target_h <= cover_h) return {target_w, target_h};
    const double s = std::min(static_cast<double>(cover_w) / target_w, static_cast<double>(cover_h) / target_h);
    return {std::clamp(static_cast<int>(std::floor(target_w * s)), 1, cover_w),
            std::clamp(static_cast<int>(std::floor(target_h * s)), 1, cover_h)};
}

inline ImageBuffer resize_watermark(const ImageBuffer& wm, const PlacementSpec& spec, int cover_w, int cover_h) {
    const auto [w, h] = fitted_size(spec.target_width, spec.target_height, cover_w, cover_h);
    return resize_bilinear(wm, w, h);
}

/// Pixel offset of the watermark's top-left corner, floored to the 8x8 block grid.
inline Offset align_position(Anchor anchor, int cover_w, int cover_h, int wm_w, int wm_h) {
    if (wm_w > cover_w || wm_h > cover_h) throw DimensionError("watermark larger than cover");
    const int idx = static_cast<int>(anchor);
    const auto place = [](int slot, int free) { return slot == 0 ? 0 : slot == 1 ? free / 2 : free; };
    const auto snap = [](int v) { return v / kBlockSize * kBlockSize; };
    const int row = std::clamp(snap(place(idx / 3, cover_h - wm_h)), 0, cover_h - wm_h);
    const int col = std::clamp(snap(place(idx % 3, cover_w - wm_w)), 0, cover_w - wm_w);
    return {row, col};
}

inline ComponentPlan plan_components(const ImageBuffer& cover, const ImageBuffer& wm) {
    if (cover.is_gray()) return ComponentPlan::gray_on_gray;
    return wm.is_gray() ? ComponentPlan::gray_on_color : ComponentPlan::color_on_color;
}

/// Factor ranges with beta_max scaled by the intensity knob:
/// beta_max' = beta_min + (beta_max - beta_min) * intensity / 100.
inline FactorConfig intensity_config(const FactorConfig& cfg, int intensity) {
    FactorConfig out = cfg;
    out.beta_max = cfg.beta_min + (cfg.beta_max - cfg.beta_min) * intensity / 100.0;
    return out;
}

/// c'_ij = alpha * c_ij + beta * w_ij over the whole block.
inline DctBlock fuse_block(const DctBlock& cover, const DctBlock& wm, const EmbedFactors& f) noexcept {
    DctBlock out;
    for (int k = 0; k < kBlockArea; ++k) out.v[k] = f.alpha * cover.v[k] + f.beta * wm.v[k];
    return out;
}

/// Fuse one watermark component into one cover component. Statistics and edge
/// flags come from the whole cover plane; only blocks under the watermark are
/// rewritten. Returns a plane of the cover's original size.
inline ImagePlane fuse_component(const ImagePlane& cover, const ImagePlane& wm, Offset at,
                                 const FactorConfig& cfg, const EdgeConfig& edge_cfg) {
    const ImagePlane cover_ext = extend_plane(cover);
    const DctGrid cover_dct = forward_dct(partition_blocks(cover_ext));
    const auto edges = detect_edge_blocks(cover_ext, edge_cfg);
    const BlockAnalysis analysis = analyze_blocks(cover_dct, edges);
    const auto factors = compute_factors(analysis.blocks, analysis.global, cfg);

    const DctGrid wm_dct = plane_to_dct(wm);
    const int by0 = at.row / kBlockSize;
    const int bx0 = at.col / kBlockSize;
    if (by0 + wm_dct.blocks_y > cover_dct.blocks_y || bx0 + wm_dct.blocks_x > cover_dct.blocks_x)
        throw DimensionError("watermark footprint exceeds cover");

    ImagePlane out = cover_ext;
    for (int wy = 0; wy < wm_dct.blocks_y; ++wy)
        for (int wx = 0; wx < wm_dct.blocks_x; ++wx) {
            const int by = by0 + wy;
            const int bx = bx0 + wx;
            const auto n = static_cast<std::size_t>(by) * cover_dct.blocks_x + bx;
            const SpatialBlock px = idct2d(fuse_block(cover_dct.blocks[n], wm_dct.at(wy, wx), factors[n]));
            for (int i = 0; i < kBlockSize; ++i)
                for (int j = 0; j < kBlockSize; ++j) out.at(by * kBlockSize + i, bx * kBlockSize + j) = px(i, j);
        }
    return crop_plane(out, cover.width(), cover.height());
}

/// Visible watermark embedding. The watermark is resized and anchored, fused
/// block-wise into the selected components, and the result keeps the cover's size.
inline ImageBuffer embed_visible(const ImageBuffer& cover, const ImageBuffer& watermark,
                                 const PlacementSpec& spec, const FactorConfig& cfg = {},
                                 const EdgeConfig& edge_cfg = {}) {
    spec.validate();
    cfg.validate();
    const ImageBuffer wm = resize_watermark(watermark, spec, cover.width(), cover.height());
    const Offset at = align_position(spec.anchor, cover.width(), cover.height(), wm.width(), wm.height());
    const FactorConfig eff = intensity_config(cfg, spec.intensity);

    ImageBuffer out = cover;
    switch (plan_components(cover, wm)) {
        case ComponentPlan::gray_on_gray: {
            const ImagePlane fused = fuse_component(channel_plane(cover, 0), luma_plane(to_gray(wm)), at, eff, edge_cfg);
            store_channel(out, 0, fused);
            break;
        }
        case ComponentPlan::color_on_color:
            for (int ch = 0; ch < 3; ++ch)
                store_channel(out, ch, fuse_component(channel_plane(cover, ch), channel_plane(wm, ch), at, eff, edge_cfg));
            break;
        case ComponentPlan::gray_on_color: {
            auto ycc = rgb_to_ycbcr(cover);
            ycc.y = fuse_component(ycc.y, channel_plane(wm, 0), at, eff, edge_cfg);
            const ImageBuffer rgb = ycbcr_to_rgb(ycc.y, ycc.cb, ycc.cr);
            // Only the footprint goes through the color round trip.
            const int r1 = std::min(cover.height(), at.row + round_up_to_block(wm.height()));
            const int c1 = std::min(cover.width(), at.col + round_up_to_block(wm.width()));
            for (int r = at.row; r < r1; ++r)
                for (int c = at.col; c < c1; ++c)
                    for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = rgb.at(r, c, ch);
            break;
        }
    }
    return out;
}

}  // namespace dctmark
