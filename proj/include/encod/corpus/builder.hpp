#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "encod/corpus/manifest.hpp"

namespace encod::corpus {

struct BuildOptions {
    std::vector<std::filesystem::path> source_dirs;
    std::vector<CodecLabel> codecs;
    std::vector<std::size_t> sizes{kSizeClasses.begin(), kSizeClasses.end()};
    std::size_t quota = 1000;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
    StorageMode mode = StorageMode::reference;
    /// Skip source files that already look compressed or encrypted.
    bool skip_high_entropy_sources = true;
    unsigned jobs = 1;
};

/// Transforms source files per codec, fragments them, samples each
/// (label, size) down to the quota and persists out_dir/manifest.jsonl
/// (merged with an existing manifest there). Returns the persisted manifest.
/// Unavailable codecs are excluded with a note; shortfalls are notes too.
Manifest build_corpus(const BuildOptions& options);

struct IngestOptions {
    std::filesystem::path dir;
    CodecLabel label = CodecLabel::png;
    std::vector<std::size_t> sizes{kSizeClasses.begin(), kSizeClasses.end()};
    std::size_t quota = 1000;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
    StorageMode mode = StorageMode::reference;
};

/// Fragments media files as-is and samples to the quota. Returns only the new
/// label's manifest (not persisted; see ingest_into).
Manifest ingest_media(const IngestOptions& options);
/// ingest_media plus merge into out_dir/manifest.jsonl.
Manifest ingest_into(const IngestOptions& options);

/// Heuristic used to keep already-compressed files out of the plaintext pool.
bool looks_compressed(util::ByteView head);

inline const char* kManifestFileName = "manifest.jsonl";

}  // namespace encod::corpus
