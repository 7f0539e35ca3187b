#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace encod::corpus {

/// AES-256 block cipher with an expanded key schedule (FIPS-197).
class Aes256 {
public:
    static constexpr std::size_t kKeySize = 32;
    static constexpr std::size_t kBlockSize = 16;
    using Block = std::array<std::uint8_t, kBlockSize>;

    explicit Aes256(std::span<const std::uint8_t> key);

    void encrypt_block(const std::uint8_t* in, std::uint8_t* out) const;
    void decrypt_block(const std::uint8_t* in, std::uint8_t* out) const;

private:
    static constexpr int kRounds = 14;
    std::array<std::uint32_t, 4 * (kRounds + 1)> enc_keys_{};
    std::array<std::uint32_t, 4 * (kRounds + 1)> dec_keys_{};
};

/// AES-256-CBC with PKCS#7 padding. Output length is ceil((n + 1) / 16) * 16.
/// Throws ArgumentError unless key is 32 bytes and iv is 16 bytes.
std::vector<std::uint8_t> encrypt_aes256cbc(std::span<const std::uint8_t> plaintext,
                                            std::span<const std::uint8_t> key,
                                            std::span<const std::uint8_t> iv);

/// Inverse of encrypt_aes256cbc; throws DataError on bad padding.
std::vector<std::uint8_t> decrypt_aes256cbc(std::span<const std::uint8_t> ciphertext,
                                            std::span<const std::uint8_t> key,
                                            std::span<const std::uint8_t> iv);

}  // namespace encod::corpus
