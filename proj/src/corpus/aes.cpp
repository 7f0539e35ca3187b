#include "encod/corpus/aes.hpp"

#include <cstring>

#include "encod/error.hpp"

namespace encod::corpus {
namespace {

constexpr std::uint8_t kSbox[256] = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

constexpr auto make_inverse_sbox() {
    std::array<std::uint8_t, 256> inv{};
    for (int i = 0; i < 256; ++i) inv[kSbox[i]] = static_cast<std::uint8_t>(i);
    return inv;
}
constexpr auto kInvSbox = make_inverse_sbox();

constexpr std::uint8_t xtime(std::uint8_t x) {
    return static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0x00));
}

constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
    std::uint8_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a = xtime(a);
        b >>= 1;
    }
    return r;
}

// Round tables: T0[x] = (2s, s, s, 3s) packed big-endian, the other three are
// byte rotations. Same for the inverse cipher with (14, 9, 13, 11).
struct Tables {
    std::array<std::uint32_t, 256> te[4];
    std::array<std::uint32_t, 256> td[4];
};

constexpr std::uint32_t pack(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    return static_cast<std::uint32_t>(a) << 24 | static_cast<std::uint32_t>(b) << 16 |
           static_cast<std::uint32_t>(c) << 8 | d;
}

constexpr std::uint32_t rotr8(std::uint32_t x) { return x >> 8 | x << 24; }

constexpr Tables make_tables() {
    Tables t{};
    for (int i = 0; i < 256; ++i) {
        const std::uint8_t s = kSbox[i];
        const std::uint32_t e = pack(gmul(s, 2), s, s, gmul(s, 3));
        const std::uint8_t is = kInvSbox[i];
        const std::uint32_t d = pack(gmul(is, 14), gmul(is, 9), gmul(is, 13), gmul(is, 11));
        t.te[0][i] = e;
        t.td[0][i] = d;
        for (int k = 1; k < 4; ++k) {
            t.te[k][i] = rotr8(t.te[k - 1][i]);
            t.td[k][i] = rotr8(t.td[k - 1][i]);
        }
    }
    return t;
}
constexpr Tables kTables = make_tables();

std::uint32_t load_be(const std::uint8_t* p) { return pack(p[0], p[1], p[2], p[3]); }

void store_be(std::uint32_t v, std::uint8_t* p) {
    p[0] = static_cast<std::uint8_t>(v >> 24);
    p[1] = static_cast<std::uint8_t>(v >> 16);
    p[2] = static_cast<std::uint8_t>(v >> 8);
    p[3] = static_cast<std::uint8_t>(v);
}

std::uint32_t sub_word(std::uint32_t w) {
    return pack(kSbox[w >> 24], kSbox[(w >> 16) & 0xff], kSbox[(w >> 8) & 0xff], kSbox[w & 0xff]);
}

std::uint32_t inv_mix_word(std::uint32_t w) {
    // InvMixColumns of a round-key word, via Td(Sbox(x)).
    const auto& td = kTables.td;
    return td[0][kSbox[w >> 24]] ^ td[1][kSbox[(w >> 16) & 0xff]] ^ td[2][kSbox[(w >> 8) & 0xff]] ^
           td[3][kSbox[w & 0xff]];
}

void check_lengths(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) {
    if (key.size() != Aes256::kKeySize)
        throw ArgumentError("AES-256 key must be 32 bytes, got " + std::to_string(key.size()));
    if (iv.size() != Aes256::kBlockSize)
        throw ArgumentError("CBC IV must be 16 bytes, got " + std::to_string(iv.size()));
}

}  // namespace

Aes256::Aes256(std::span<const std::uint8_t> key) {
    if (key.size() != kKeySize) throw ArgumentError("AES-256 key must be 32 bytes");
    constexpr int nk = 8;
    constexpr int total = 4 * (kRounds + 1);
    for (int i = 0; i < nk; ++i) enc_keys_[i] = load_be(key.data() + 4 * i);
    std::uint32_t rcon = 0x01;
    for (int i = nk; i < total; ++i) {
        std::uint32_t temp = enc_keys_[i - 1];
        if (i % nk == 0) {
            temp = sub_word(temp << 8 | temp >> 24) ^ (rcon << 24);
            rcon = xtime(static_cast<std::uint8_t>(rcon));
        } else if (i % nk == 4) {
            temp = sub_word(temp);
        }
        enc_keys_[i] = enc_keys_[i - nk] ^ temp;
    }
    // Equivalent inverse cipher: reversed round order, InvMixColumns on the
    // inner round keys.
    for (int r = 0; r <= kRounds; ++r)
        for (int c = 0; c < 4; ++c) {
            const std::uint32_t w = enc_keys_[4 * (kRounds - r) + c];
            dec_keys_[4 * r + c] = (r == 0 || r == kRounds) ? w : inv_mix_word(w);
        }
}

void Aes256::encrypt_block(const std::uint8_t* in, std::uint8_t* out) const {
    const auto& te = kTables.te;
    std::uint32_t s0 = load_be(in) ^ enc_keys_[0];
    std::uint32_t s1 = load_be(in + 4) ^ enc_keys_[1];
    std::uint32_t s2 = load_be(in + 8) ^ enc_keys_[2];
    std::uint32_t s3 = load_be(in + 12) ^ enc_keys_[3];
    for (int r = 1; r < kRounds; ++r) {
        const std::uint32_t* k = &enc_keys_[4 * r];
        const std::uint32_t t0 = te[0][s0 >> 24] ^ te[1][(s1 >> 16) & 0xff] ^ te[2][(s2 >> 8) & 0xff] ^ te[3][s3 & 0xff] ^ k[0];
        const std::uint32_t t1 = te[0][s1 >> 24] ^ te[1][(s2 >> 16) & 0xff] ^ te[2][(s3 >> 8) & 0xff] ^ te[3][s0 & 0xff] ^ k[1];
        const std::uint32_t t2 = te[0][s2 >> 24] ^ te[1][(s3 >> 16) & 0xff] ^ te[2][(s0 >> 8) & 0xff] ^ te[3][s1 & 0xff] ^ k[2];
        const std::uint32_t t3 = te[0][s3 >> 24] ^ te[1][(s0 >> 16) & 0xff] ^ te[2][(s1 >> 8) & 0xff] ^ te[3][s2 & 0xff] ^ k[3];
        s0 = t0;
        s1 = t1;
        s2 = t2;
        s3 = t3;
    }
    const std::uint32_t* k = &enc_keys_[4 * kRounds];
    auto last = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d, std::uint32_t key) {
        return pack(kSbox[a >> 24], kSbox[(b >> 16) & 0xff], kSbox[(c >> 8) & 0xff], kSbox[d & 0xff]) ^ key;
    };
    store_be(last(s0, s1, s2, s3, k[0]), out);
    store_be(last(s1, s2, s3, s0, k[1]), out + 4);
    store_be(last(s2, s3, s0, s1, k[2]), out + 8);
    store_be(last(s3, s0, s1, s2, k[3]), out + 12);
}

void Aes256::decrypt_block(const std::uint8_t* in, std::uint8_t* out) const {
    const auto& td = kTables.td;
    std::uint32_t s0 = load_be(in) ^ dec_keys_[0];
    std::uint32_t s1 = load_be(in + 4) ^ dec_keys_[1];
    std::uint32_t s2 = load_be(in + 8) ^ dec_keys_[2];
    std::uint32_t s3 = load_be(in + 12) ^ dec_keys_[3];
    for (int r = 1; r < kRounds; ++r) {
        const std::uint32_t* k = &dec_keys_[4 * r];
        const std::uint32_t t0 = td[0][s0 >> 24] ^ td[1][(s3 >> 16) & 0xff] ^ td[2][(s2 >> 8) & 0xff] ^ td[3][s1 & 0xff] ^ k[0];
        const std::uint32_t t1 = td[0][s1 >> 24] ^ td[1][(s0 >> 16) & 0xff] ^ td[2][(s3 >> 8) & 0xff] ^ td[3][s2 & 0xff] ^ k[1];
        const std::uint32_t t2 = td[0][s2 >> 24] ^ td[1][(s1 >> 16) & 0xff] ^ td[2][(s0 >> 8) & 0xff] ^ td[3][s3 & 0xff] ^ k[2];
        const std::uint32_t t3 = td[0][s3 >> 24] ^ td[1][(s2 >> 16) & 0xff] ^ td[2][(s1 >> 8) & 0xff] ^ td[3][s0 & 0xff] ^ k[3];
        s0 = t0;
        s1 = t1;
        s2 = t2;
        s3 = t3;
    }
    const std::uint32_t* k = &dec_keys_[4 * kRounds];
    auto last = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d, std::uint32_t key) {
        return pack(kInvSbox[a >> 24], kInvSbox[(b >> 16) & 0xff], kInvSbox[(c >> 8) & 0xff], kInvSbox[d & 0xff]) ^ key;
    };
    store_be(last(s0, s3, s2, s1, k[0]), out);
    store_be(last(s1, s0, s3, s2, k[1]), out + 4);
    store_be(last(s2, s1, s0, s3, k[2]), out + 8);
    store_be(last(s3, s2, s1, s0, k[3]), out + 12);
}

std::vector<std::uint8_t> encrypt_aes256cbc(std::span<const std::uint8_t> plaintext,
                                            std::span<const std::uint8_t> key,
                                            std::span<const std::uint8_t> iv) {
    check_lengths(key, iv);
    const Aes256 cipher(key);
    constexpr std::size_t bs = Aes256::kBlockSize;
    const std::size_t padded = (plaintext.size() / bs + 1) * bs;
    std::vector<std::uint8_t> out(padded);
    std::memcpy(out.data(), plaintext.data(), plaintext.size());
    const auto pad = static_cast<std::uint8_t>(padded - plaintext.size());
    std::memset(out.data() + plaintext.size(), pad, pad);

    std::uint8_t chain[bs];
    std::memcpy(chain, iv.data(), bs);
    for (std::size_t off = 0; off < padded; off += bs) {
        std::uint8_t* block = out.data() + off;
        for (std::size_t i = 0; i < bs; ++i) block[i] ^= chain[i];
        cipher.encrypt_block(block, block);
        std::memcpy(chain, block, bs);
    }
    return out;
}

std::vector<std::uint8_t> decrypt_aes256cbc(std::span<const std::uint8_t> ciphertext,
                                            std::span<const std::uint8_t> key,
                                            std::span<const std::uint8_t> iv) {
    check_lengths(key, iv);
    constexpr std::size_t bs = Aes256::kBlockSize;
    if (ciphertext.empty() || ciphertext.size() % bs != 0)
        throw DataError("CBC ciphertext length must be a positive multiple of 16");
    const Aes256 cipher(key);
    std::vector<std::uint8_t> out(ciphertext.size());
    const std::uint8_t* prev = iv.data();
    for (std::size_t off = 0; off < ciphertext.size(); off += bs) {
        cipher.decrypt_block(ciphertext.data() + off, out.data() + off);
        for (std::size_t i = 0; i < bs; ++i) out[off + i] ^= prev[i];
        prev = ciphertext.data() + off;
    }
    const std::uint8_t pad = out.back();
    if (pad == 0 || pad > bs) throw DataError("bad PKCS#7 padding");
    for (std::size_t i = out.size() - pad; i < out.size(); ++i)
        if (out[i] != pad) throw DataError("bad PKCS#7 padding");
    out.resize(out.size() - pad);
    return out;
}

}  // namespace encod::corpus
