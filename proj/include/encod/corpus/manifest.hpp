#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "encod/corpus/codec_label.hpp"
#include "encod/corpus/fragment.hpp"

namespace encod::corpus {

enum class StorageMode {
    reference,  ///< (path, offset) into transformed or ingested files
    inline_files,  ///< one file per fragment, offset 0
};

std::string_view to_string(StorageMode mode);
StorageMode storage_mode_from_string(std::string_view name);

struct ManifestEntry {
    std::string path;  ///< relative to the manifest directory unless absolute
    std::uint64_t offset = 0;
    std::size_t size = 0;
    CodecLabel label = CodecLabel::enc;
    std::string origin;
    std::string sha256;

    bool operator==(const ManifestEntry&) const = default;
};

/// How a label's fragments were produced.
struct LabelSource {
    std::string provider;  ///< implementation identity ("zlib", "ingest", ...)
    std::string version;
    std::uint64_t seed = 0;
    std::size_t quota = 0;
    std::size_t files_used = 0;

    bool operator==(const LabelSource&) const = default;
};

struct Manifest {
    std::uint64_t seed = 0;
    std::size_t quota = 0;
    StorageMode mode = StorageMode::reference;
    bool balanced = true;
    std::vector<std::string> notes;
    std::map<std::string, LabelSource> providers;  ///< keyed by label name
    std::vector<ManifestEntry> entries;

    /// Directory relative entry paths are resolved against (not serialized).
    std::filesystem::path base_dir;

    std::vector<ManifestEntry> select(CodecLabel label, std::size_t size) const;
    std::vector<ManifestEntry> select_size(std::size_t size) const;
    std::size_t count(CodecLabel label, std::size_t size) const;
    bool has_label(CodecLabel label) const;

    /// Replaces every entry and provider record of the labels present in
    /// `other` with those of `other`; everything else is kept.
    void merge(const Manifest& other);
    /// Canonical entry order: label, size, path, offset.
    void sort_entries();
};

/// JSON-lines: one header object, then one object per fragment.
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
std::string serialize_manifest(const Manifest& manifest);
/// Throws DataError on malformed files.
Manifest read_manifest(const std::filesystem::path& path);

/// Resolves entries and reads fragment bytes; keeps the last file open.
class FragmentReader {
public:
    explicit FragmentReader(std::filesystem::path base_dir);

    /// Throws DataError if the entry cannot be read in full.
    util::Bytes read(const ManifestEntry& entry);
    void read_into(const ManifestEntry& entry, util::Bytes& out);

private:
    std::filesystem::path base_dir_;
    std::filesystem::path open_path_;
    std::ifstream stream_;
};

/// Re-reads every fragment and compares digests; returns the mismatching entries.
std::vector<ManifestEntry> verify_manifest(const Manifest& manifest);

}  // namespace encod::corpus
