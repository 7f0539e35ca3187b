#pragma once

#include <cstdint>
#include <span>

#include "encod/features/histogram.hpp"

namespace encod::randomness {

/// Plug-in (maximum likelihood) Shannon entropy in bits per byte, in [0, 8].
double entropy_mle(const features::FeatureVector& v);
/// Throws ArgumentError on empty input.
double entropy_mle(std::span<const std::uint8_t> fragment);

}  // namespace encod::randomness
