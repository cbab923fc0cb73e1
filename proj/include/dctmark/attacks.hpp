#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "dctmark/color.hpp"
#include "dctmark/error.hpp"
#include "dctmark/image.hpp"
#include "dctmark/image_io.hpp"
#include "dctmark/invisible.hpp"

// Robustness attacks. Median filtering and random jitter stand in for the
// corresponding Stirmark attacks; they are local approximations, not the
// Stirmark binary.

namespace dctmark {

enum class AttackKind { jpeg, gray_quantize, blur, crop, median, jitter };

inline constexpr std::array<std::string_view, 6> kAttackKindNames{"jpeg",   "gray-quantize", "blur",
                                                                  "crop",   "median",        "jitter"};

inline std::string_view to_string(AttackKind k) noexcept { return kAttackKindNames[static_cast<int>(k)]; }

inline std::optional<AttackKind> parse_attack_kind(std::string_view s) {
    for (std::size_t i = 0; i < kAttackKindNames.size(); ++i)
        if (kAttackKindNames[i] == s) return static_cast<AttackKind>(i);
    if (s == "gray" || s == "quantize") return AttackKind::gray_quantize;
    return std::nullopt;
}

enum class Corner { top_left, top_right, bottom_left, bottom_right };

inline constexpr std::array<std::string_view, 4> kCornerNames{"top-left", "top-right", "bottom-left", "bottom-right"};

inline std::optional<Corner> parse_corner(std::string_view s) {
    for (std::size_t i = 0; i < kCornerNames.size(); ++i)
        if (kCornerNames[i] == s) return static_cast<Corner>(i);
    return std::nullopt;
}

inline constexpr std::uint64_t kDefaultJitterSeed = 20100;

struct AttackParams {
    int quality = 75;           ///< jpeg, 1-100
    int levels = 16;            ///< gray-quantize, power of two in [2, 256]
    double radius = 1.0;        ///< blur, Gaussian sigma in pixels
    double fraction = 0.25;     ///< crop, share of the image area
    Corner corner = Corner::top_left;
    int window = 3;             ///< median, odd
    int displacement = 1;       ///< jitter, max offset in pixels
    std::uint64_t seed = kDefaultJitterSeed;
};

struct AttackStep {
    AttackKind kind = AttackKind::jpeg;
    AttackParams params;
};

/// A named sequence of steps. One step is a plain attack, several a
/// composite, none the identity.
struct AttackSpec {
    std::string name;
    std::vector<AttackStep> steps;
};

inline void validate(const AttackStep& s) {
    const auto& p = s.params;
    switch (s.kind) {
        case AttackKind::jpeg:
            if (p.quality < 1 || p.quality > 100) throw ConfigError("jpeg quality must lie in [1, 100]");
            break;
        case AttackKind::gray_quantize:
            if (p.levels < 2 || p.levels > 256 || (p.levels & (p.levels - 1)) != 0)
                throw ConfigError("levels must be a power of two in [2, 256]");
            break;
        case AttackKind::blur:
            if (!(p.radius > 0.0 && p.radius <= 50.0)) throw ConfigError("blur radius must lie in (0, 50]");
            break;
        case AttackKind::crop:
            if (!(p.fraction > 0.0 && p.fraction < 1.0)) throw ConfigError("crop fraction must lie in (0, 1)");
            break;
        case AttackKind::median:
            if (p.window < 3 || p.window % 2 == 0) throw ConfigError("median window must be odd and >= 3");
            break;
        case AttackKind::jitter:
            if (p.displacement < 0 || p.displacement > 64) throw ConfigError("displacement must lie in [0, 64]");
            break;
    }
}

/// Human-readable parameters of a step, e.g. "jpeg(quality=75)".
inline std::string describe(const AttackStep& s) {
    std::ostringstream os;
    os << to_string(s.kind) << '(';
    const auto& p = s.params;
    switch (s.kind) {
        case AttackKind::jpeg: os << "quality=" << p.quality; break;
        case AttackKind::gray_quantize: os << "levels=" << p.levels; break;
        case AttackKind::blur: os << "radius=" << p.radius; break;
        case AttackKind::crop: os << "fraction=" << p.fraction << " corner=" << kCornerNames[static_cast<int>(p.corner)]; break;
        case AttackKind::median: os << "window=" << p.window; break;
        case AttackKind::jitter: os << "displacement=" << p.displacement << " seed=" << p.seed; break;
    }
    os << ')';
    return os.str();
}

inline std::string describe(const AttackSpec& spec) {
    std::string out;
    for (const auto& s : spec.steps) {
        if (!out.empty()) out += " + ";
        out += describe(s);
    }
    return out.empty() ? "identity" : out;
}

namespace detail {

inline ImageBuffer gray_quantize(const ImageBuffer& img, int levels) {
    const int step = 256 / levels;
    ImageBuffer gray = to_gray(img);
    for (auto& v : gray.samples()) v = static_cast<std::uint8_t>(std::min(255, v / step * step + step / 2));
    return img.is_gray() ? gray : gray_to_rgb(gray);
}

inline ImageBuffer crop_fill(const ImageBuffer& img, double fraction, Corner corner) {
    const double side = std::sqrt(fraction);
    const int h = static_cast<int>(std::lround(img.height() * side));
    const int w = static_cast<int>(std::lround(img.width() * side));
    const bool bottom = corner == Corner::bottom_left || corner == Corner::bottom_right;
    const bool right = corner == Corner::top_right || corner == Corner::bottom_right;
    const int r0 = bottom ? img.height() - h : 0;
    const int c0 = right ? img.width() - w : 0;
    ImageBuffer out = img;
    for (int r = r0; r < r0 + h; ++r)
        for (int c = c0; c < c0 + w; ++c)
            for (int ch = 0; ch < img.channels(); ++ch) out.at(r, c, ch) = 128;
    return out;
}

template <class F>
ImageBuffer apply_cv(const ImageBuffer& img, F&& f) {
    cv::Mat src(img.height(), img.width(), img.is_gray() ? CV_8UC1 : CV_8UC3,
                const_cast<std::uint8_t*>(img.samples().data()));
    cv::Mat dst;
    f(src, dst);
    if (!dst.isContinuous()) dst = dst.clone();
    return ImageBuffer(img.width(), img.height(), img.channels(), std::vector<std::uint8_t>(dst.datastart, dst.dataend));
}

// Every pixel is replaced by a neighbour up to `d` pixels away; all channels move together.
inline ImageBuffer jitter(const ImageBuffer& img, int d, std::uint64_t seed) {
    if (d == 0) return img;
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * d + 1);
    const auto offset = [&] { return static_cast<int>(rng() % span) - d; };
    ImageBuffer out(img.width(), img.height(), img.channels());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) {
            const int sr = std::clamp(r + offset(), 0, img.height() - 1);
            const int sc = std::clamp(c + offset(), 0, img.width() - 1);
            for (int ch = 0; ch < img.channels(); ++ch) out.at(r, c, ch) = img.at(sr, sc, ch);
        }
    return out;
}

}  // namespace detail

inline ImageBuffer attack(const ImageBuffer& img, const AttackStep& step) {
    validate(step);
    const auto& p = step.params;
    switch (step.kind) {
        case AttackKind::jpeg: return jpeg_round_trip(img, p.quality);
        case AttackKind::gray_quantize: return detail::gray_quantize(img, p.levels);
        case AttackKind::blur:
            return detail::apply_cv(img, [&](const cv::Mat& s, cv::Mat& d) {
                const int k = 2 * static_cast<int>(std::ceil(3.0 * p.radius)) + 1;
                cv::GaussianBlur(s, d, cv::Size(k, k), p.radius, p.radius, cv::BORDER_REPLICATE);
            });
        case AttackKind::crop: return detail::crop_fill(img, p.fraction, p.corner);
        case AttackKind::median:
            return detail::apply_cv(img, [&](const cv::Mat& s, cv::Mat& d) { cv::medianBlur(s, d, p.window); });
        case AttackKind::jitter: return detail::jitter(img, p.displacement, p.seed);
    }
    return img;
}

/// Apply every step in order. Output always has the input's dimensions.
inline ImageBuffer attack(const ImageBuffer& img, const AttackSpec& spec) {
    ImageBuffer out = img;
    for (const auto& s : spec.steps) out = attack(out, s);
    return out;
}

inline AttackStep make_step(AttackKind kind, AttackParams params = {}) { return {kind, params}; }

/// The seven-row robustness suite.
inline std::vector<AttackSpec> default_attack_suite() {
    AttackParams q256;
    q256.levels = 256;
    return {
        {"jpeg-q75", {make_step(AttackKind::jpeg)}},
        {"gray-16-levels", {make_step(AttackKind::gray_quantize)}},
        {"gray-256-levels+jpeg", {make_step(AttackKind::gray_quantize, q256), make_step(AttackKind::jpeg)}},
        {"blur+jpeg", {make_step(AttackKind::blur), make_step(AttackKind::jpeg)}},
        {"partial-crop-25", {make_step(AttackKind::crop)}},
        {"stirmark-style-median-3x3", {make_step(AttackKind::median)}},
        {"stirmark-style-random-jitter", {make_step(AttackKind::jitter)}},
    };
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline AttackSpec build_spec(const std::map<std::string, std::string>& kv, int line) {
    const auto where = " (block ending line " + std::to_string(line) + ")";
    AttackParams p;
    std::vector<AttackKind> kinds;
    std::string name;
    try {
        for (const auto& [k, v] : kv) {
            if (k == "name") name = v;
            else if (k == "kind") {
                std::string part;
                std::istringstream is(v);
                while (std::getline(is, part, '+')) {
                    const auto kind = parse_attack_kind(trim(part));
                    if (!kind) throw ConfigError("unknown attack kind '" + trim(part) + "'");
                    kinds.push_back(*kind);
                }
            } else if (k == "quality") p.quality = std::stoi(v);
            else if (k == "levels") p.levels = std::stoi(v);
            else if (k == "radius") p.radius = std::stod(v);
            else if (k == "fraction") p.fraction = std::stod(v);
            else if (k == "window") p.window = std::stoi(v);
            else if (k == "displacement") p.displacement = std::stoi(v);
            else if (k == "seed") p.seed = std::stoull(v);
            else if (k == "corner") {
                const auto c = parse_corner(v);
                if (!c) throw ConfigError("unknown corner '" + v + "'");
                p.corner = *c;
            } else throw ConfigError("unknown key '" + k + "'");
        }
    } catch (const std::logic_error&) {
        throw ConfigError("malformed number in attack suite" + where);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what() + where);
    }
    if (kv.find("kind") == kv.end()) throw ConfigError("attack block has no kind" + where);
    AttackSpec spec;
    for (auto k : kinds) {
        spec.steps.push_back({k, p});
        validate(spec.steps.back());
    }
    spec.name = name.empty() ? describe(spec) : name;
    return spec;
}

}  // namespace detail

/// Parse an attack suite: blank-line separated blocks of key=value lines.
/// Keys: name, kind (steps joined by '+'), quality, levels, radius,
/// fraction, corner, window, displacement, seed. '#' starts a comment.
inline std::vector<AttackSpec> parse_attack_suite(std::istream& in) {
    std::vector<AttackSpec> out;
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    const auto flush = [&] {
        if (!kv.empty()) out.push_back(detail::build_spec(kv, lineno));
        kv.clear();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) {
            flush();
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = detail::trim(std::string_view(t).substr(eq + 1));
    }
    flush();
    return out;
}

struct AttackResult {
    std::string attack;
    std::string params;
    double match_fraction = 0.0;
    std::size_t reliable_count = 0;
    Verdict verdict = Verdict::not_authentic;

    bool survived() const noexcept { return verdict == Verdict::authentic; }
};

/// Attack the watermarked image with each suite entry and authenticate the result.
inline std::vector<AttackResult> run_attack_matrix(const ImageBuffer& watermarked, const ImageBuffer& original,
                                                   const BinaryWatermark& wm, const WatermarkKey& key,
                                                   const std::vector<AttackSpec>& suite, const AuthConfig& auth = {},
                                                   const AlphaConfig& cfg = {}) {
    std::vector<AttackResult> rows;
    rows.reserve(suite.size());
    for (const auto& spec : suite) {
        const ImageBuffer attacked = attack(watermarked, spec);
        const AuthDecision d = extract_watermark(attacked, original, wm, key, auth, cfg);
        rows.push_back({spec.name, describe(spec), d.match_fraction, d.reliable_count, d.verdict});
    }
    return rows;
}

}  // namespace dctmark
