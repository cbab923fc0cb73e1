#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dctmark {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable, undecodable or unwritable image file.
class ImageIoError : public Error {
public:
    ImageIoError(const std::string& path, const std::string& reason)
        : Error(path + ": " + reason), path_(path), reason_(reason) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

/// Operands whose sizes or channel counts do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Raised by rgb_to_ycbcr on single-channel input; use the intensity plane.
class GrayInputError : public DimensionError {
public:
    GrayInputError() : DimensionError("image is gray; use its intensity plane directly") {}
};

/// Invalid configuration value (factor ranges, attack parameters, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Passphrase outside the accepted length range.
class KeyError : public Error {
public:
    using Error::Error;
};

/// Binary watermark larger than the cover can carry.
class CapacityError : public Error {
public:
    CapacityError(std::size_t required_bits, std::size_t max_bits)
        : Error("watermark needs " + std::to_string(required_bits) +
                " bits but the cover carries at most " + std::to_string(max_bits)),
          required_bits_(required_bits), max_bits_(max_bits) {}

    std::size_t required_bits() const noexcept { return required_bits_; }
    std::size_t max_bits() const noexcept { return max_bits_; }

private:
    std::size_t required_bits_;
    std::size_t max_bits_;
};

}  // namespace dctmark
