#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "dctmark/error.hpp"
#include "dctmark/image.hpp"

namespace dctmark {

enum class ImageFormat { png, bmp, jpeg, unknown };

/// Identify a file by its leading magic bytes.
inline ImageFormat sniff_format(std::span<const std::uint8_t> head) {
    static constexpr std::array<std::uint8_t, 8> png_magic{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (head.size() >= png_magic.size() && std::equal(png_magic.begin(), png_magic.end(), head.begin()))
        return ImageFormat::png;
    if (head.size() >= 2 && head[0] == 'B' && head[1] == 'M') return ImageFormat::bmp;
    if (head.size() >= 3 && head[0] == 0xff && head[1] == 0xd8 && head[2] == 0xff)
        return ImageFormat::jpeg;
    return ImageFormat::unknown;
}

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw ImageIoError(path, "unreadable: no such file");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError(path, "unreadable: cannot open file");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Normalise any decoded Mat to 8-bit gray or 8-bit RGB.
inline ImageBuffer from_mat(cv::Mat m) {
    if (m.depth() == CV_16U) m.convertTo(m, CV_8U, 1.0 / 257.0);
    else if (m.depth() != CV_8U) m.convertTo(m, CV_8U);

    cv::Mat rgb;
    int channels = 3;
    switch (m.channels()) {
        case 1: rgb = m; channels = 1; break;
        case 2: cv::extractChannel(m, rgb, 0); channels = 1; break;
        case 3: cv::cvtColor(m, rgb, cv::COLOR_BGR2RGB); break;
        case 4: cv::cvtColor(m, rgb, cv::COLOR_BGRA2RGB); break;
        default: throw DimensionError("unsupported channel count " + std::to_string(m.channels()));
    }
    if (!rgb.isContinuous()) rgb = rgb.clone();
    std::vector<std::uint8_t> samples(rgb.datastart, rgb.dataend);
    return ImageBuffer(rgb.cols, rgb.rows, channels, std::move(samples));
}

inline cv::Mat to_mat(const ImageBuffer& img) {
    cv::Mat view(img.height(), img.width(), img.is_gray() ? CV_8UC1 : CV_8UC3,
                 const_cast<std::uint8_t*>(img.samples().data()));
    cv::Mat out;
    if (img.is_gray()) out = view.clone();
    else cv::cvtColor(view, out, cv::COLOR_RGB2BGR);
    return out;
}

}  // namespace detail

/// Decode a PNG, BMP or JPEG file. Gray files give a 1-channel buffer,
/// alpha is dropped, 16-bit samples are scaled to 8 bits.
inline ImageBuffer load_image(const std::string& path) {
    const auto bytes = detail::read_file(path);
    if (sniff_format(bytes) == ImageFormat::unknown)
        throw ImageIoError(path, "unsupported format: expected PNG, BMP or JPEG");
    cv::Mat m;
    try {
        m = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
    } catch (const cv::Exception& e) {
        throw ImageIoError(path, std::string("unreadable: ") + e.what());
    }
    if (m.empty()) throw ImageIoError(path, "unreadable: corrupt or truncated image data");
    return detail::from_mat(std::move(m));
}

inline std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", detail::to_mat(img), out))
        throw Error("PNG encoding failed");
    return out;
}

/// Always writes PNG, whatever the extension of `path`.
inline void save_image(const ImageBuffer& img, const std::string& path) {
    if (img.empty()) throw ImageIoError(path, "refusing to write an empty image");
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ImageIoError(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw ImageIoError(path, "write failed");
}

/// Encode to baseline JPEG at `quality` (1-100) and decode again.
inline ImageBuffer jpeg_round_trip(const ImageBuffer& img, int quality) {
    std::vector<std::uint8_t> buf;
    const std::vector<int> params{cv::IMWRITE_JPEG_QUALITY, quality};
    if (!cv::imencode(".jpg", detail::to_mat(img), buf, params)) throw Error("JPEG encoding failed");
    cv::Mat m = cv::imdecode(buf, img.is_gray() ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR);
    if (m.empty()) throw Error("JPEG decoding failed");
    return detail::from_mat(std::move(m));
}

}  // namespace dctmark
