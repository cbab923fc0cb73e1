#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "dctmark/blocks.hpp"
#include "dctmark/error.hpp"
#include "dctmark/image.hpp"

// Block statistics and the per-block scaling (alpha) / embedding (beta)
// factors used by visible embedding. Means come from the DC term, texture
// from the log variance of the 63 AC terms; both are rescaled to [0.1, 1].

namespace dctmark {

inline constexpr double kNormLow = 0.1;
inline constexpr double kNormHigh = 1.0;
/// Substituted for a zero AC variance before taking the log.
inline constexpr double kVarianceFloor = 1e-12;

struct BlockStats {
    double mu_prime_n = kNormHigh;     ///< normalised block mean
    double sigma_n = 0.0;              ///< log variance of the AC terms
    double sigma_prime_n = kNormHigh;  ///< normalised log variance
    double mu_ac_n = 0.0;              ///< mean of the AC terms
    bool is_edge = false;
};

struct GlobalStats {
    double mu_prime = kNormHigh;  ///< mean of all mu_prime_n
    double c00_min = 0.0;
    double c00_max = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

struct FactorConfig {
    double alpha_min = 0.95;
    double alpha_max = 0.98;
    double beta_min = 0.05;
    double beta_max = 0.17;

    void validate() const {
        if (!(alpha_min > 0.0 && alpha_min <= alpha_max && alpha_max <= 1.0))
            throw ConfigError("alpha range must satisfy 0 < alpha_min <= alpha_max <= 1");
        if (!(beta_min >= 0.0 && beta_min <= beta_max))
            throw ConfigError("beta range must satisfy 0 <= beta_min <= beta_max");
    }
};

struct EdgeConfig {
    double magnitude_threshold = 100.0;  ///< Sobel magnitude, 8-bit scale
    double edge_fraction = 0.15;         ///< share of edge pixels that makes an edge block

    void validate() const {
        if (!(magnitude_threshold >= 0.0)) throw ConfigError("edge threshold must be >= 0");
        if (!(edge_fraction >= 0.0 && edge_fraction <= 1.0))
            throw ConfigError("edge fraction must lie in [0, 1]");
    }
};

struct EmbedFactors {
    double alpha = 1.0;
    double beta = 0.0;
};

/// Map v from [lo, hi] onto [0.1, 1.0]; a degenerate range maps to 1.0.
inline double normalize_unit(double v, double lo, double hi) noexcept {
    if (!(hi > lo)) return kNormHigh;
    return kNormLow + (kNormHigh - kNormLow) * (v - lo) / (hi - lo);
}

struct MeanStats {
    std::vector<double> mu_prime_n;
    double mu_prime = kNormHigh;
    double c00_min = 0.0;
    double c00_max = 0.0;
};

inline MeanStats block_means(const DctGrid& g) {
    if (g.blocks.empty()) throw DimensionError("block grid is empty");
    MeanStats out;
    const auto [lo, hi] = std::minmax_element(g.blocks.begin(), g.blocks.end(),
                                              [](const auto& a, const auto& b) { return a(0, 0) < b(0, 0); });
    out.c00_min = (*lo)(0, 0);
    out.c00_max = (*hi)(0, 0);
    out.mu_prime_n.reserve(g.size());
    double sum = 0.0;
    for (const auto& b : g.blocks) {
        out.mu_prime_n.push_back(normalize_unit(b(0, 0), out.c00_min, out.c00_max));
        sum += out.mu_prime_n.back();
    }
    out.mu_prime = sum / static_cast<double>(g.size());
    return out;
}

struct VarianceStats {
    std::vector<double> sigma_n;
    std::vector<double> sigma_prime_n;
    std::vector<double> mu_ac_n;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

/// Mean and log variance of the 63 AC coefficients of one block.
inline std::pair<double, double> ac_log_variance(const DctBlock& b) noexcept {
    double mean = 0.0;
    for (int k = 1; k < kBlockArea; ++k) mean += b.v[k];
    mean /= kBlockArea - 1;
    double var = 0.0;
    for (int k = 1; k < kBlockArea; ++k) var += (b.v[k] - mean) * (b.v[k] - mean);
    var /= kBlockArea - 1;
    return {mean, std::log(var > 0.0 ? var : kVarianceFloor)};
}

inline VarianceStats block_log_variances(const DctGrid& g) {
    if (g.blocks.empty()) throw DimensionError("block grid is empty");
    VarianceStats out;
    out.sigma_n.reserve(g.size());
    out.mu_ac_n.reserve(g.size());
    for (const auto& b : g.blocks) {
        const auto [mean, logvar] = ac_log_variance(b);
        out.mu_ac_n.push_back(mean);
        out.sigma_n.push_back(logvar);
    }
    const auto [lo, hi] = std::minmax_element(out.sigma_n.begin(), out.sigma_n.end());
    out.sigma_min = *lo;
    out.sigma_max = *hi;
    out.sigma_prime_n.reserve(g.size());
    for (double s : out.sigma_n) out.sigma_prime_n.push_back(normalize_unit(s, out.sigma_min, out.sigma_max));
    return out;
}

/// 3x3 Sobel gradient magnitude with replicated borders.
inline ImagePlane sobel_magnitude(const ImagePlane& p) {
    ImagePlane out(p.width(), p.height());
    const auto px = [&](int r, int c) {
        return p.at(std::clamp(r, 0, p.height() - 1), std::clamp(c, 0, p.width() - 1));
    };
    for (int r = 0; r < p.height(); ++r)
        for (int c = 0; c < p.width(); ++c) {
            const double gx = (px(r - 1, c + 1) + 2 * px(r, c + 1) + px(r + 1, c + 1)) -
                              (px(r - 1, c - 1) + 2 * px(r, c - 1) + px(r + 1, c - 1));
            const double gy = (px(r + 1, c - 1) + 2 * px(r + 1, c) + px(r + 1, c + 1)) -
                              (px(r - 1, c - 1) + 2 * px(r - 1, c) + px(r - 1, c + 1));
            out.at(r, c) = std::sqrt(gx * gx + gy * gy);
        }
    return out;
}

/// One flag per 8x8 block, raster order: true when more than
/// `edge_fraction` of the block's pixels exceed the Sobel threshold.
inline std::vector<bool> detect_edge_blocks(const ImagePlane& p, const EdgeConfig& cfg = {}) {
    cfg.validate();
    if (p.width() % kBlockSize != 0 || p.height() % kBlockSize != 0)
        throw DimensionError("edge detection needs a plane extended to multiples of 8");
    const ImagePlane mag = sobel_magnitude(p);
    const int bx_count = p.width() / kBlockSize;
    const int by_count = p.height() / kBlockSize;
    std::vector<bool> edges(static_cast<std::size_t>(bx_count) * by_count, false);
    for (int by = 0; by < by_count; ++by)
        for (int bx = 0; bx < bx_count; ++bx) {
            int strong = 0;
            for (int i = 0; i < kBlockSize; ++i)
                for (int j = 0; j < kBlockSize; ++j)
                    if (mag.at(by * kBlockSize + i, bx * kBlockSize + j) > cfg.magnitude_threshold) ++strong;
            edges[static_cast<std::size_t>(by) * bx_count + bx] =
                static_cast<double>(strong) / kBlockArea > cfg.edge_fraction;
        }
    return edges;
}

struct BlockAnalysis {
    std::vector<BlockStats> blocks;
    GlobalStats global;
};

/// Gather per-block statistics for a DCT grid; `edges` must hold one flag per block.
inline BlockAnalysis analyze_blocks(const DctGrid& g, const std::vector<bool>& edges) {
    if (edges.size() != g.size()) throw DimensionError("edge mask does not match block count");
    const MeanStats means = block_means(g);
    const VarianceStats vars = block_log_variances(g);
    BlockAnalysis out;
    out.global = {means.mu_prime, means.c00_min, means.c00_max, vars.sigma_min, vars.sigma_max};
    out.blocks.reserve(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
        out.blocks.push_back({means.mu_prime_n[n], vars.sigma_n[n], vars.sigma_prime_n[n],
                              vars.mu_ac_n[n], static_cast<bool>(edges[n])});
    return out;
}

/// Scaling and embedding factor of a single block, clamped into the configured ranges.
inline EmbedFactors block_factors(double mu_prime_n, double sigma_prime_n, double mu_prime,
                                  bool is_edge, const FactorConfig& cfg) noexcept {
    if (is_edge) return {cfg.alpha_max, cfg.beta_min};
    const double d = mu_prime_n - mu_prime;
    const double g = std::exp(-d * d);
    const double alpha = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * sigma_prime_n * g;
    const double beta = cfg.beta_min + (cfg.beta_max - cfg.beta_min) * (1.0 / sigma_prime_n) * (1.0 - g);
    return {std::clamp(alpha, cfg.alpha_min, cfg.alpha_max), std::clamp(beta, cfg.beta_min, cfg.beta_max)};
}

inline std::vector<EmbedFactors> compute_factors(std::span<const BlockStats> stats, const GlobalStats& global,
                                                 const FactorConfig& cfg) {
    cfg.validate();
    std::vector<EmbedFactors> out;
    out.reserve(stats.size());
    for (const auto& s : stats)
        out.push_back(block_factors(s.mu_prime_n, s.sigma_prime_n, global.mu_prime, s.is_edge, cfg));
    return out;
}

}  // namespace dctmark
