#include "encod/features/histogram.hpp"

#include "encod/error.hpp"

namespace encod::features {

ByteCounts byte_counts(std::span<const std::uint8_t> data) {
    // Four interleaved tables avoid store-to-load stalls on runs of equal bytes.
    std::array<std::array<std::uint32_t, kFeatureWidth>, 4> partial{};
    std::size_t i = 0;
    for (; i + 4 <= data.size(); i += 4) {
        ++partial[0][data[i]];
        ++partial[1][data[i + 1]];
        ++partial[2][data[i + 2]];
        ++partial[3][data[i + 3]];
    }
    for (; i < data.size(); ++i) ++partial[0][data[i]];
    ByteCounts out{};
    for (std::size_t v = 0; v < kFeatureWidth; ++v)
        out[v] = partial[0][v] + partial[1][v] + partial[2][v] + partial[3][v];
    return out;
}

FeatureVector byte_histogram(std::span<const std::uint8_t> data) {
    if (data.empty()) throw ArgumentError("byte_histogram: empty fragment");
    const ByteCounts counts = byte_counts(data);
    const double n = static_cast<double>(data.size());
    FeatureVector v;
    for (std::size_t i = 0; i < kFeatureWidth; ++i) v.values[i] = static_cast<double>(counts[i]) / n;
    return v;
}

}  // namespace encod::features
