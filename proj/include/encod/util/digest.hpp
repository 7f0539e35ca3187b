#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace encod::util {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Lowercase hex SHA-256 of a byte range.
std::string sha256_hex(ByteView data);
std::string sha256_hex(std::string_view text);
/// SHA-256 of a whole file, streamed.
std::string sha256_file(const std::filesystem::path& path);

std::string base64_encode(ByteView data);
/// Throws CorruptFile on malformed input.
Bytes base64_decode(std::string_view text);

std::string hex_encode(ByteView data);
Bytes hex_decode(std::string_view hex);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView data);

}  // namespace encod::util
