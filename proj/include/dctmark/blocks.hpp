#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "dctmark/dct.hpp"
#include "dctmark/error.hpp"
#include "dctmark/image.hpp"

namespace dctmark {

/// Blocks of a plane in raster-scan order. Block n (0-based here) sits at
/// block row n / blocks_x, block column n % blocks_x.
template <class Tag>
struct BlockGrid {
    int blocks_x = 0;
    int blocks_y = 0;
    std::vector<Matrix8<Tag>> blocks;

    std::size_t size() const noexcept { return blocks.size(); }
    Matrix8<Tag>& at(int by, int bx) { return blocks[static_cast<std::size_t>(by) * blocks_x + bx]; }
    const Matrix8<Tag>& at(int by, int bx) const {
        return blocks[static_cast<std::size_t>(by) * blocks_x + bx];
    }
};

using SpatialGrid = BlockGrid<SpatialTag>;
using DctGrid = BlockGrid<FrequencyTag>;

constexpr int round_up_to_block(int n) noexcept {
    return (n + kBlockSize - 1) / kBlockSize * kBlockSize;
}

/// Grow a plane to multiples of 8 by repeating its last row and column.
inline ImagePlane extend_plane(const ImagePlane& p) {
    const int w = round_up_to_block(p.width());
    const int h = round_up_to_block(p.height());
    if (w == p.width() && h == p.height()) return p;
    ImagePlane out(w, h);
    for (int r = 0; r < h; ++r) {
        const int sr = std::min(r, p.height() - 1);
        for (int c = 0; c < w; ++c) out.at(r, c) = p.at(sr, std::min(c, p.width() - 1));
    }
    return out;
}

inline SpatialGrid partition_blocks(const ImagePlane& p) {
    if (p.width() % kBlockSize != 0 || p.height() % kBlockSize != 0)
        throw DimensionError("plane dimensions must be multiples of 8; extend the plane first");
    SpatialGrid g;
    g.blocks_x = p.width() / kBlockSize;
    g.blocks_y = p.height() / kBlockSize;
    g.blocks.resize(static_cast<std::size_t>(g.blocks_x) * g.blocks_y);
    for (int by = 0; by < g.blocks_y; ++by)
        for (int bx = 0; bx < g.blocks_x; ++bx) {
            auto& b = g.at(by, bx);
            for (int i = 0; i < kBlockSize; ++i)
                for (int j = 0; j < kBlockSize; ++j)
                    b(i, j) = p.at(by * kBlockSize + i, bx * kBlockSize + j);
        }
    return g;
}

inline ImagePlane assemble_plane(const SpatialGrid& g) {
    if (g.blocks_x <= 0 || g.blocks_y <= 0 ||
        g.blocks.size() != static_cast<std::size_t>(g.blocks_x) * g.blocks_y)
        throw DimensionError("block grid is inconsistent");
    ImagePlane p(g.blocks_x * kBlockSize, g.blocks_y * kBlockSize);
    for (int by = 0; by < g.blocks_y; ++by)
        for (int bx = 0; bx < g.blocks_x; ++bx) {
            const auto& b = g.at(by, bx);
            for (int i = 0; i < kBlockSize; ++i)
                for (int j = 0; j < kBlockSize; ++j)
                    p.at(by * kBlockSize + i, bx * kBlockSize + j) = b(i, j);
        }
    return p;
}

inline DctGrid forward_dct(const SpatialGrid& g) {
    DctGrid out{g.blocks_x, g.blocks_y, {}};
    out.blocks.reserve(g.size());
    for (const auto& b : g.blocks) out.blocks.push_back(dct2d(b));
    return out;
}

inline SpatialGrid inverse_dct(const DctGrid& g) {
    SpatialGrid out{g.blocks_x, g.blocks_y, {}};
    out.blocks.reserve(g.size());
    for (const auto& b : g.blocks) out.blocks.push_back(idct2d(b));
    return out;
}

/// extend -> partition -> DCT in one step.
inline DctGrid plane_to_dct(const ImagePlane& p) {
    return forward_dct(partition_blocks(extend_plane(p)));
}

/// IDCT -> assemble -> crop back to width x height.
inline ImagePlane dct_to_plane(const DctGrid& g, int width, int height) {
    return crop_plane(assemble_plane(inverse_dct(g)), width, height);
}

}  // namespace dctmark
