#pragma once

#include <filesystem>
#include <string>

namespace encod::testkit {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Writes `count` text files of roughly `bytes` each (deterministic prose-like
/// content) into dir.
void write_text_sources(const std::filesystem::path& dir, int count, std::size_t bytes, unsigned seed);

}  // namespace encod::testkit
