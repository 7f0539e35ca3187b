#include "encod/corpus/fragment.hpp"

#include <algorithm>

#include "encod/error.hpp"

namespace encod::corpus {

bool is_size_class(std::size_t size) {
    return std::find(kSizeClasses.begin(), kSizeClasses.end(), size) != kSizeClasses.end();
}

void require_size_class(std::size_t size) {
    if (!is_size_class(size))
        throw ArgumentError("fragment size " + std::to_string(size) +
                            " is not one of 512, 1024, 2048, 4096, 8192");
}

std::vector<Fragment> fragment_stream(util::ByteView data, std::size_t size_class, CodecLabel label,
                                      const std::string& origin_id) {
    require_size_class(size_class);
    std::vector<Fragment> out;
    const std::size_t count = data.size() / size_class;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto chunk = data.subspan(i * size_class, size_class);
        out.push_back(Fragment{util::Bytes(chunk.begin(), chunk.end()), size_class, label, origin_id,
                               static_cast<std::uint64_t>(i * size_class)});
    }
    return out;
}

}  // namespace encod::corpus
