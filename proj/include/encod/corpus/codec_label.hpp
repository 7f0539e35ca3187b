#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace encod::corpus {

/// Base content label carried by every fragment.
enum class CodecLabel {
    enc,
    zip,
    gzip,
    bz2,
    xz,
    rar,
    png,
    jpeg,
    mp3,
    pdf,
    office,
    h264,
    h265,
    mpeg2,
    mpeg4,
    vp8,
};

inline constexpr std::array<CodecLabel, 16> kAllLabels = {
    CodecLabel::enc,  CodecLabel::zip,  CodecLabel::gzip,   CodecLabel::bz2,
    CodecLabel::xz,   CodecLabel::rar,  CodecLabel::png,    CodecLabel::jpeg,
    CodecLabel::mp3,  CodecLabel::pdf,  CodecLabel::office, CodecLabel::h264,
    CodecLabel::h265, CodecLabel::mpeg2, CodecLabel::mpeg4, CodecLabel::vp8,
};

std::string_view to_string(CodecLabel label);
std::optional<CodecLabel> parse_label(std::string_view name);
/// Like parse_label but throws ArgumentError on unknown names.
CodecLabel label_from_string(std::string_view name);

/// Labels produced by transforming plaintext (enc and the archive formats).
bool is_transform_label(CodecLabel label);
/// Labels taken from pre-existing media files without transformation.
bool is_ingest_label(CodecLabel label);

/// Macro grouping used for fingerprinting: cmp = {zip, gzip, rar, bz2},
/// video = {h264, h265, mpeg2, mpeg4, vp8}; other labels map to themselves.
std::string_view macro_label(CodecLabel label);
/// Base labels belonging to a macro (or the single label of that name).
std::vector<CodecLabel> macro_members(std::string_view macro);

}  // namespace encod::corpus
