#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace encod::features {

inline constexpr std::size_t kFeatureWidth = 256;

/// Normalized byte-value histogram: values[i] = count(i) / length.
struct FeatureVector {
    std::array<double, kFeatureWidth> values{};

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    bool operator==(const FeatureVector&) const = default;
};

using ByteCounts = std::array<std::uint32_t, kFeatureWidth>;

ByteCounts byte_counts(std::span<const std::uint8_t> data);

/// Throws ArgumentError on empty input.
FeatureVector byte_histogram(std::span<const std::uint8_t> data);

}  // namespace encod::features
