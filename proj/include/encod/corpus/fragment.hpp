#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "encod/corpus/codec_label.hpp"
#include "encod/util/digest.hpp"

namespace encod::corpus {

inline constexpr std::array<std::size_t, 5> kSizeClasses = {512, 1024, 2048, 4096, 8192};

bool is_size_class(std::size_t size);
/// Throws ArgumentError when size is not one of kSizeClasses.
void require_size_class(std::size_t size);

struct Fragment {
    util::Bytes bytes;
    std::size_t size_class = 0;
    CodecLabel label = CodecLabel::enc;
    std::string origin_id;
    std::uint64_t offset = 0;
};

/// Consecutive non-overlapping chunks at offsets 0, S, 2S, ...; the trailing
/// partial chunk is dropped.
std::vector<Fragment> fragment_stream(util::ByteView data, std::size_t size_class,
                                      CodecLabel label = CodecLabel::enc,
                                      const std::string& origin_id = {});

}  // namespace encod::corpus
