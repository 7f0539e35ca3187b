#include "encod/corpus/codecs.hpp"

#include <lzma.h>
#include <zlib.h>

#include <atomic>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <random>

#include "encod/corpus/aes.hpp"
#include "encod/error.hpp"
#include "encod/util/process.hpp"

namespace encod::corpus {
namespace {

constexpr int kDeflateLevel = 6;  // gzip and zip command-line default

util::Bytes deflate_bytes(util::ByteView input, int window_bits, gz_header* header) {
    z_stream zs{};
    if (deflateInit2(&zs, kDeflateLevel, Z_DEFLATED, window_bits, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error("deflateInit2 failed");
    if (header && deflateSetHeader(&zs, header) != Z_OK) {
        deflateEnd(&zs);
        throw Error("deflateSetHeader failed");
    }
    util::Bytes out(deflateBound(&zs, static_cast<uLong>(input.size())) + 64);
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    const std::size_t written = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error("deflate did not finish");
    out.resize(written);
    return out;
}

void put16(util::Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(util::Bytes& out, std::uint32_t v) {
    put16(out, v & 0xffff);
    put16(out, v >> 16);
}

class GzipProvider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::gzip; }
    std::string name() const override { return "zlib (gzip container, level 6)"; }
    std::string version() const override { return zlibVersion(); }
    std::string extension() const override { return "gz"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t, const std::string& member) const override {
        std::string fname = member;
        gz_header header{};
        header.name = reinterpret_cast<Bytef*>(fname.data());
        header.time = 0;
        header.os = 3;
        return deflate_bytes(plaintext, 15 + 16, &header);
    }
};

// Single-entry PKZIP archive with a deflated member, as `zip` writes by default.
class ZipProvider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::zip; }
    std::string name() const override { return "zlib (pkzip container, deflate level 6)"; }
    std::string version() const override { return zlibVersion(); }
    std::string extension() const override { return "zip"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t, const std::string& member) const override {
        if (plaintext.size() >= 0xffffffffull) throw ArgumentError("zip provider: input exceeds 4 GiB");
        const util::Bytes body = deflate_bytes(plaintext, -15, nullptr);
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, plaintext.data(), static_cast<uInt>(plaintext.size())));
        const auto csize = static_cast<std::uint32_t>(body.size());
        const auto usize = static_cast<std::uint32_t>(plaintext.size());
        const auto name_len = static_cast<std::uint32_t>(member.size());
        constexpr std::uint32_t dos_time = 0;
        constexpr std::uint32_t dos_date = (1 << 5) | 1;  // 1980-01-01

        util::Bytes out;
        out.reserve(body.size() + 2 * member.size() + 128);
        put32(out, 0x04034b50);
        put16(out, 20);  // version needed
        put16(out, 0);   // flags
        put16(out, 8);   // deflate
        put16(out, dos_time);
        put16(out, dos_date);
        put32(out, crc);
        put32(out, csize);
        put32(out, usize);
        put16(out, name_len);
        put16(out, 0);
        out.insert(out.end(), member.begin(), member.end());
        out.insert(out.end(), body.begin(), body.end());

        const auto cd_offset = static_cast<std::uint32_t>(out.size());
        put32(out, 0x02014b50);
        put16(out, (3 << 8) | 20);  // made by: unix, 2.0
        put16(out, 20);
        put16(out, 0);
        put16(out, 8);
        put16(out, dos_time);
        put16(out, dos_date);
        put32(out, crc);
        put32(out, csize);
        put32(out, usize);
        put16(out, name_len);
        put16(out, 0);  // extra
        put16(out, 0);  // comment
        put16(out, 0);  // disk
        put16(out, 0);  // internal attrs
        put32(out, 0100644u << 16);
        put32(out, 0);  // local header offset
        out.insert(out.end(), member.begin(), member.end());
        const auto cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;

        put32(out, 0x06054b50);
        put16(out, 0);
        put16(out, 0);
        put16(out, 1);
        put16(out, 1);
        put32(out, cd_size);
        put32(out, cd_offset);
        put16(out, 0);
        return out;
    }
};

class XzProvider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::xz; }
    std::string name() const override { return "liblzma (xz container, preset 6, crc64)"; }
    std::string version() const override { return lzma_version_string(); }
    std::string extension() const override { return "xz"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t, const std::string&) const override {
        util::Bytes out(lzma_stream_buffer_bound(plaintext.size()));
        std::size_t pos = 0;
        const lzma_ret rc = lzma_easy_buffer_encode(6, LZMA_CHECK_CRC64, nullptr, plaintext.data(),
                                                    plaintext.size(), out.data(), &pos, out.size());
        if (rc != LZMA_OK) throw Error("lzma_easy_buffer_encode failed with code " + std::to_string(rc));
        out.resize(pos);
        return out;
    }
};

// No bzip2 development headers on the reference machine; the utility is
// universally present and its -9 default is what the format is known by.
class Bzip2Provider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::bz2; }
    std::string name() const override { return "bzip2 (system utility, -9)"; }
    std::string version() const override {
        std::call_once(version_once_, [this] {
            version_ = "unknown";
            if (!available()) return;
            const auto res = util::run_filter({"bzip2", "--help"}, {});
            const std::string text(res.err.begin(), res.err.end());
            const auto at = text.find("Version ");
            if (at != std::string::npos) {
                const auto end = text.find_first_of(",\n", at);
                version_ = text.substr(at + 8, end - at - 8);
            }
        });
        return version_;
    }
    bool available() const override { return util::find_executable("bzip2").has_value(); }
    std::string extension() const override { return "bz2"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t, const std::string&) const override {
        if (!available()) throw CodecUnavailable("bz2: bzip2 utility not found on PATH");
        auto res = util::run_filter({"bzip2", "-c", "-9"}, plaintext);
        if (res.exit_code != 0)
            throw Error("bzip2 exited with " + std::to_string(res.exit_code) + ": " +
                        std::string(res.err.begin(), res.err.end()));
        return std::move(res.out);
    }

private:
    mutable std::once_flag version_once_;
    mutable std::string version_;
};

// rar has no open-source encoder; use the proprietary utility when installed.
class RarProvider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::rar; }
    std::string name() const override { return "rar (system utility, default method)"; }
    std::string version() const override { return available() ? "system" : "unavailable"; }
    bool available() const override { return util::find_executable("rar").has_value(); }
    std::string extension() const override { return "rar"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t seed, const std::string& member) const override {
        if (!available()) throw CodecUnavailable("rar: no rar encoder installed (rar not found on PATH)");
        static std::atomic<std::uint64_t> counter{0};
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() /
                             ("encod-rar-" + std::to_string(seed) + "-" + std::to_string(counter++));
        fs::create_directories(dir);
        struct Cleanup {
            fs::path p;
            ~Cleanup() {
                std::error_code ec;
                fs::remove_all(p, ec);
            }
        } cleanup{dir};
        const fs::path in = dir / (member.empty() ? "data.txt" : fs::path(member).filename());
        const fs::path archive = dir / "out.rar";
        util::write_file(in, plaintext);
        const auto res = util::run_filter({"rar", "a", "-ep", "-idq", "-tsm-", "-tsc-", "-tsa-", archive.string(),
                                           in.string()},
                                          {});
        if (res.exit_code != 0) throw Error("rar exited with " + std::to_string(res.exit_code));
        return util::read_file(archive);
    }
};

class EncProvider final : public CodecProvider {
public:
    CodecLabel label() const override { return CodecLabel::enc; }
    std::string name() const override { return "aes-256-cbc (built-in, pkcs7, per-file key and iv)"; }
    std::string version() const override { return "1"; }
    std::string extension() const override { return "enc"; }

    util::Bytes transform(util::ByteView plaintext, std::uint64_t seed, const std::string&) const override {
        const CipherMaterial m = derive_cipher_material(seed);
        return encrypt_aes256cbc(plaintext, m.key, m.iv);
    }
};

}  // namespace

std::shared_ptr<const CodecProvider> default_provider(CodecLabel codec) {
    static const auto enc = std::make_shared<EncProvider>();
    static const auto zip = std::make_shared<ZipProvider>();
    static const auto gzip = std::make_shared<GzipProvider>();
    static const auto bz2 = std::make_shared<Bzip2Provider>();
    static const auto xz = std::make_shared<XzProvider>();
    static const auto rar = std::make_shared<RarProvider>();
    switch (codec) {
        case CodecLabel::enc: return enc;
        case CodecLabel::zip: return zip;
        case CodecLabel::gzip: return gzip;
        case CodecLabel::bz2: return bz2;
        case CodecLabel::xz: return xz;
        case CodecLabel::rar: return rar;
        default:
            throw ArgumentError("'" + std::string(to_string(codec)) +
                                "' is an ingest label; it has no transform provider");
    }
}

util::Bytes transform_file(util::ByteView plaintext, CodecLabel codec, std::uint64_t rng_seed,
                           const std::string& member_name) {
    if (plaintext.empty()) throw ArgumentError("transform_file: empty plaintext");
    const auto provider = default_provider(codec);
    return provider->transform(plaintext, rng_seed, member_name);
}

CipherMaterial derive_cipher_material(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x656e63u};
    std::mt19937_64 rng(seq);
    CipherMaterial m;
    auto fill = [&rng](std::uint8_t* p, std::size_t n) {
        for (std::size_t i = 0; i < n; i += 8) {
            const std::uint64_t v = rng();
            std::memcpy(p + i, &v, std::min<std::size_t>(8, n - i));
        }
    };
    fill(m.key.data(), m.key.size());
    fill(m.iv.data(), m.iv.size());
    return m;
}

}  // namespace encod::corpus
