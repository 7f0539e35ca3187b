#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "encod/corpus/codec_label.hpp"
#include "encod/util/digest.hpp"

namespace encod::corpus {

/// Turns plaintext into the byte stream of one transform label. Providers are
/// stateless; `seed` only matters for enc (key and IV derivation).
class CodecProvider {
public:
    virtual ~CodecProvider() = default;

    virtual CodecLabel label() const = 0;
    /// Implementation identity, e.g. "zlib" or "bzip2 (system utility)".
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    virtual bool available() const { return true; }
    /// File extension used when the transformed stream is stored on disk.
    virtual std::string extension() const = 0;

    /// Throws CodecUnavailable when available() is false.
    virtual util::Bytes transform(util::ByteView plaintext, std::uint64_t seed,
                                  const std::string& member_name) const = 0;
};

/// Default provider for a transform label. Throws ArgumentError for ingest labels.
std::shared_ptr<const CodecProvider> default_provider(CodecLabel codec);

/// Transforms one file's contents. `member_name` is the archive entry / gzip
/// FNAME field for archive formats.
/// Throws ArgumentError on empty input or non-transform codec, CodecUnavailable
/// when the provider cannot run.
util::Bytes transform_file(util::ByteView plaintext, CodecLabel codec, std::uint64_t rng_seed,
                           const std::string& member_name = "data.txt");

/// Key and IV used for an encrypted file, derived from the per-file seed.
struct CipherMaterial {
    std::array<std::uint8_t, 32> key{};
    std::array<std::uint8_t, 16> iv{};
};
CipherMaterial derive_cipher_material(std::uint64_t seed);

}  // namespace encod::corpus
