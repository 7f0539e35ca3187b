#include "encod/corpus/codec_label.hpp"

#include "encod/error.hpp"

namespace encod::corpus {

std::string_view to_string(CodecLabel label) {
    switch (label) {
        case CodecLabel::enc: return "enc";
        case CodecLabel::zip: return "zip";
        case CodecLabel::gzip: return "gzip";
        case CodecLabel::bz2: return "bz2";
        case CodecLabel::xz: return "xz";
        case CodecLabel::rar: return "rar";
        case CodecLabel::png: return "png";
        case CodecLabel::jpeg: return "jpeg";
        case CodecLabel::mp3: return "mp3";
        case CodecLabel::pdf: return "pdf";
        case CodecLabel::office: return "office";
        case CodecLabel::h264: return "h264";
        case CodecLabel::h265: return "h265";
        case CodecLabel::mpeg2: return "mpeg2";
        case CodecLabel::mpeg4: return "mpeg4";
        case CodecLabel::vp8: return "vp8";
    }
    return "unknown";
}

std::optional<CodecLabel> parse_label(std::string_view name) {
    for (CodecLabel l : kAllLabels)
        if (to_string(l) == name) return l;
    return std::nullopt;
}

CodecLabel label_from_string(std::string_view name) {
    if (auto l = parse_label(name)) return *l;
    throw ArgumentError("unknown codec label '" + std::string(name) + "'");
}

bool is_transform_label(CodecLabel label) {
    switch (label) {
        case CodecLabel::enc:
        case CodecLabel::zip:
        case CodecLabel::gzip:
        case CodecLabel::bz2:
        case CodecLabel::xz:
        case CodecLabel::rar:
            return true;
        default:
            return false;
    }
}

bool is_ingest_label(CodecLabel label) { return !is_transform_label(label); }

std::string_view macro_label(CodecLabel label) {
    switch (label) {
        case CodecLabel::zip:
        case CodecLabel::gzip:
        case CodecLabel::rar:
        case CodecLabel::bz2:
            return "cmp";
        case CodecLabel::h264:
        case CodecLabel::h265:
        case CodecLabel::mpeg2:
        case CodecLabel::mpeg4:
        case CodecLabel::vp8:
            return "video";
        default:
            return to_string(label);
    }
}

std::vector<CodecLabel> macro_members(std::string_view macro) {
    std::vector<CodecLabel> out;
    for (CodecLabel l : kAllLabels)
        if (macro_label(l) == macro) out.push_back(l);
    if (out.empty()) throw ArgumentError("unknown label or macro '" + std::string(macro) + "'");
    return out;
}

}  // namespace encod::corpus
