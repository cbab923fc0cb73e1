#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>

#include "dctmark/error.hpp"
#include "dctmark/image.hpp"

namespace dctmark {

/// PSNR in dB, or "infinite" for identical images.
class Psnr {
public:
    static Psnr infinite() noexcept { return Psnr(0.0, true); }
    static Psnr finite(double db) noexcept { return Psnr(db, false); }

    bool is_infinite() const noexcept { return infinite_; }
    /// Only meaningful when !is_infinite().
    double db() const noexcept { return db_; }

    std::string to_string(int precision = 2) const {
        if (infinite_) return "inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", precision, db_);
        return buf;
    }

    /// Infinite compares greater than any finite value.
    friend bool operator<(const Psnr& a, const Psnr& b) noexcept {
        if (a.infinite_) return false;
        return b.infinite_ || a.db_ < b.db_;
    }

private:
    Psnr(double db, bool inf) noexcept : db_(db), infinite_(inf) {}
    double db_;
    bool infinite_;
};

struct QualityReport {
    double mse = 0.0;
    Psnr psnr = Psnr::infinite();
    int bit_depth = 8;
};

/// Mean squared sample difference over width x height x channels samples.
inline double mse(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) throw DimensionError("images differ in size or channel count");
    const auto sa = a.samples();
    const auto sb = b.samples();
    double acc = 0.0;
    for (std::size_t k = 0; k < sa.size(); ++k) {
        const double d = static_cast<double>(sa[k]) - static_cast<double>(sb[k]);
        acc += d * d;
    }
    return acc / static_cast<double>(sa.size());
}

inline Psnr psnr_from_mse(double mse_value, int bit_depth = 8) {
    if (bit_depth < 1 || bit_depth > 16) throw ConfigError("bit depth must lie in [1, 16]");
    if (mse_value <= 0.0) return Psnr::infinite();
    const double peak = std::ldexp(1.0, bit_depth) - 1.0;
    return Psnr::finite(10.0 * std::log10(peak * peak / mse_value));
}

inline Psnr psnr(const ImageBuffer& a, const ImageBuffer& b, int bit_depth = 8) {
    return psnr_from_mse(mse(a, b), bit_depth);
}

inline QualityReport quality(const ImageBuffer& a, const ImageBuffer& b, int bit_depth = 8) {
    const double m = mse(a, b);
    return {m, psnr_from_mse(m, bit_depth), bit_depth};
}

/// Mean of (b - a) over all samples.
inline double mean_signed_difference(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) throw DimensionError("images differ in size or channel count");
    const auto sa = a.samples();
    const auto sb = b.samples();
    double acc = 0.0;
    for (std::size_t k = 0; k < sa.size(); ++k) acc += static_cast<double>(sb[k]) - static_cast<double>(sa[k]);
    return acc / static_cast<double>(sa.size());
}

}  // namespace dctmark
