#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace dctmark {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

struct SpatialTag {};
struct FrequencyTag {};

/// 8x8 real matrix, row-major. The tag keeps pixel blocks and coefficient
/// blocks from being mixed up.
template <class Tag>
struct Matrix8 {
    std::array<double, kBlockArea> v{};

    double& operator()(int i, int j) noexcept { return v[i * kBlockSize + j]; }
    double operator()(int i, int j) const noexcept { return v[i * kBlockSize + j]; }

    friend bool operator==(const Matrix8&, const Matrix8&) = default;
};

using SpatialBlock = Matrix8<SpatialTag>;
/// DCT coefficients c_ij of one block; (0,0) is DC.
using DctBlock = Matrix8<FrequencyTag>;

namespace detail {

// basis[u][x] = s(u) cos((2x+1) u pi / 16), s(0) = sqrt(1/8), s(u>0) = sqrt(2/8)
inline const std::array<std::array<double, kBlockSize>, kBlockSize>& dct_basis() {
    static const auto table = [] {
        std::array<std::array<double, kBlockSize>, kBlockSize> t{};
        for (int u = 0; u < kBlockSize; ++u) {
            const double s = u == 0 ? std::sqrt(1.0 / kBlockSize) : std::sqrt(2.0 / kBlockSize);
            for (int x = 0; x < kBlockSize; ++x)
                t[u][x] = s * std::cos((2 * x + 1) * u * std::numbers::pi / (2.0 * kBlockSize));
        }
        return t;
    }();
    return table;
}

}  // namespace detail

/// Orthonormal 2-D DCT-II, separable rows-then-columns. c_00 = 8 * block mean.
inline DctBlock dct2d(const SpatialBlock& b) noexcept {
    const auto& basis = detail::dct_basis();
    std::array<double, kBlockArea> tmp{};
    for (int x = 0; x < kBlockSize; ++x)
        for (int v = 0; v < kBlockSize; ++v) {
            double acc = 0.0;
            for (int y = 0; y < kBlockSize; ++y) acc += basis[v][y] * b(x, y);
            tmp[x * kBlockSize + v] = acc;
        }
    DctBlock out;
    for (int u = 0; u < kBlockSize; ++u)
        for (int v = 0; v < kBlockSize; ++v) {
            double acc = 0.0;
            for (int x = 0; x < kBlockSize; ++x) acc += basis[u][x] * tmp[x * kBlockSize + v];
            out(u, v) = acc;
        }
    return out;
}

inline SpatialBlock idct2d(const DctBlock& d) noexcept {
    const auto& basis = detail::dct_basis();
    std::array<double, kBlockArea> tmp{};
    for (int u = 0; u < kBlockSize; ++u)
        for (int y = 0; y < kBlockSize; ++y) {
            double acc = 0.0;
            for (int v = 0; v < kBlockSize; ++v) acc += basis[v][y] * d(u, v);
            tmp[u * kBlockSize + y] = acc;
        }
    SpatialBlock out;
    for (int x = 0; x < kBlockSize; ++x)
        for (int y = 0; y < kBlockSize; ++y) {
            double acc = 0.0;
            for (int u = 0; u < kBlockSize; ++u) acc += basis[u][x] * tmp[u * kBlockSize + y];
            out(x, y) = acc;
        }
    return out;
}

}  // namespace dctmark
