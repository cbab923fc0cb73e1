#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include "dctmark/error.hpp"

namespace dctmark {

inline constexpr std::size_t kMinKeyLength = 6;
inline constexpr std::size_t kMaxKeyLength = 56;

/// User passphrase, 6 to 56 characters.
class WatermarkKey {
public:
    explicit WatermarkKey(std::string passphrase) : passphrase_(std::move(passphrase)) {
        if (passphrase_.size() < kMinKeyLength || passphrase_.size() > kMaxKeyLength)
            throw KeyError("key must be " + std::to_string(kMinKeyLength) + "-" +
                           std::to_string(kMaxKeyLength) + " characters, got " +
                           std::to_string(passphrase_.size()));
    }

    const std::string& passphrase() const noexcept { return passphrase_; }

private:
    std::string passphrase_;
};

/// SHA-256 of the passphrase, used as the AES-256 key.
inline std::array<std::uint8_t, 32> derive_key_material(const WatermarkKey& key) {
    std::array<std::uint8_t, 32> out{};
    SHA256(reinterpret_cast<const unsigned char*>(key.passphrase().data()), key.passphrase().size(), out.data());
    return out;
}

/// `n_bits` keystream bits (0/1), AES-256-CTR over a zero counter block,
/// most significant bit of each byte first.
inline std::vector<std::uint8_t> keystream_bits(const WatermarkKey& key, std::size_t n_bits) {
    const auto material = derive_key_material(key);
    const std::array<std::uint8_t, 16> iv{};
    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, material.data(), iv.data()) != 1)
        throw Error("keystream cipher initialisation failed");

    const std::size_t n_bytes = (n_bits + 7) / 8;
    const std::vector<std::uint8_t> zeros(n_bytes, 0);
    std::vector<std::uint8_t> stream(n_bytes + 16);
    int len = 0;
    if (n_bytes > 0 &&
        EVP_EncryptUpdate(ctx.get(), stream.data(), &len, zeros.data(), static_cast<int>(n_bytes)) != 1)
        throw Error("keystream generation failed");

    std::vector<std::uint8_t> bits(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) bits[i] = (stream[i / 8] >> (7 - i % 8)) & 1u;
    return bits;
}

/// XOR a bit sequence with the keystream in place. Applying it twice restores the input.
inline void xor_keystream(std::vector<std::uint8_t>& bits, const WatermarkKey& key) {
    const auto ks = keystream_bits(key, bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bits[i] ^ ks[i]) & 1u;
}

}  // namespace dctmark
