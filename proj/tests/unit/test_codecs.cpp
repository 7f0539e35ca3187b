#include <gtest/gtest.h>

#include <zlib.h>

#include "encod/corpus/aes.hpp"
#include "encod/corpus/codecs.hpp"
#include "encod/error.hpp"
#include "encod/util/digest.hpp"
#include "support/oracles.hpp"

using namespace encod;
using namespace encod::corpus;

namespace {

util::Bytes text(std::size_t n) {
    std::string s;
    while (s.size() < n) s += "a plain line of text with a counter " + std::to_string(s.size()) + "\n";
    s.resize(n);
    return {s.begin(), s.end()};
}

util::Bytes gunzip(const util::Bytes& in) {
    z_stream zs{};
    inflateInit2(&zs, 31);
    util::Bytes out(1 << 22);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    EXPECT_EQ(rc, Z_STREAM_END);
    out.resize(zs.total_out);
    inflateEnd(&zs);
    return out;
}

}  // namespace

TEST(TransformFile, EmptyInputIsAnError) {
    for (auto c : {CodecLabel::enc, CodecLabel::gzip, CodecLabel::zip, CodecLabel::xz})
        EXPECT_THROW(transform_file({}, c, 1), ArgumentError);
}

TEST(TransformFile, IngestLabelsAreNotTransforms) {
    EXPECT_THROW(transform_file(text(100), CodecLabel::png, 1), ArgumentError);
    EXPECT_THROW(default_provider(CodecLabel::mp3), ArgumentError);
}

TEST(TransformFile, GzipOfZerosIsTiny) {
    const util::Bytes zeros(1 << 20, 0);
    const auto out = transform_file(zeros, CodecLabel::gzip, 1);
    EXPECT_LT(out.size(), zeros.size() / 100);
    // Golden length recorded from this provider (zlib level 6, gzip header with name).
    EXPECT_EQ(out.size(), 1060u);
    EXPECT_EQ(gunzip(out), zeros);
}

TEST(TransformFile, GzipHeaderAndRoundTrip) {
    const auto plain = text(50000);
    const auto out = transform_file(plain, CodecLabel::gzip, 1, "doc.txt");
    ASSERT_GT(out.size(), 18u);
    EXPECT_EQ(out[0], 0x1f);
    EXPECT_EQ(out[1], 0x8b);
    EXPECT_EQ(gunzip(out), plain);
}

TEST(TransformFile, ZipContainerStructure) {
    const auto plain = text(30000);
    const auto out = transform_file(plain, CodecLabel::zip, 1, "doc.txt");
    ASSERT_GT(out.size(), 100u);
    EXPECT_EQ(std::string(out.begin(), out.begin() + 4), std::string("PK\x03\x04", 4));
    // End of central directory record sits at the end (no comment).
    EXPECT_EQ(std::string(out.end() - 22, out.end() - 18), std::string("PK\x05\x06", 4));
    // Stored CRC matches zlib's crc32 of the plaintext.
    const std::uint32_t crc = out[14] | (out[15] << 8) | (out[16] << 16) | (static_cast<std::uint32_t>(out[17]) << 24);
    EXPECT_EQ(crc, crc32(0, plain.data(), static_cast<uInt>(plain.size())));
    EXPECT_LT(out.size(), plain.size());
}

TEST(TransformFile, XzMagic) {
    const auto out = transform_file(text(20000), CodecLabel::xz, 1);
    const unsigned char magic[] = {0xfd, '7', 'z', 'X', 'Z', 0x00};
    EXPECT_TRUE(std::equal(std::begin(magic), std::end(magic), out.begin()));
}

TEST(TransformFile, Bzip2WhenAvailable) {
    auto p = default_provider(CodecLabel::bz2);
    if (!p->available()) GTEST_SKIP() << "bzip2 utility not installed";
    const auto out = transform_file(text(20000), CodecLabel::bz2, 1);
    EXPECT_EQ(std::string(out.begin(), out.begin() + 3), "BZh");
    EXPECT_FALSE(p->version().empty());
}

TEST(TransformFile, RarUnavailableIsDistinguishable) {
    auto p = default_provider(CodecLabel::rar);
    if (p->available()) GTEST_SKIP() << "rar is installed here";
    EXPECT_THROW(transform_file(text(1000), CodecLabel::rar, 1), CodecUnavailable);
}

TEST(TransformFile, EncIsDeterministicPerSeedAndPadded) {
    const auto plain = text(4096);
    const auto a = transform_file(plain, CodecLabel::enc, 42);
    const auto b = transform_file(plain, CodecLabel::enc, 42);
    const auto c = transform_file(plain, CodecLabel::enc, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(a.size(), 4096u + 16u);
    const auto m = derive_cipher_material(42);
    EXPECT_EQ(decrypt_aes256cbc(a, m.key, m.iv), plain);
}

TEST(TransformFile, EncPaddedLengthForAnyInput) {
    for (std::size_t n : {1u, 15u, 16u, 17u, 1000u}) {
        const auto out = transform_file(text(n), CodecLabel::enc, n);
        EXPECT_EQ(out.size() % 16, 0u);
        EXPECT_GT(out.size(), n);
    }
}

TEST(TransformFile, CipherMaterialDiffersAcrossSeeds) {
    const auto a = derive_cipher_material(1);
    const auto b = derive_cipher_material(2);
    EXPECT_NE(a.key, b.key);
    EXPECT_NE(a.iv, b.iv);
}

TEST(Providers, IdentityIsRecorded) {
    for (auto c : {CodecLabel::enc, CodecLabel::zip, CodecLabel::gzip, CodecLabel::xz}) {
        auto p = default_provider(c);
        EXPECT_EQ(p->label(), c);
        EXPECT_FALSE(p->name().empty());
        EXPECT_FALSE(p->version().empty());
        EXPECT_TRUE(p->available());
    }
}
