#include "encod/randomness/entropy.hpp"

#include <cmath>

#include "encod/error.hpp"

namespace encod::randomness {

double entropy_mle(const features::FeatureVector& v) {
    double h = 0.0;
    for (double f : v.values)
        if (f > 0.0) h -= f * std::log2(f);
    return h < 0.0 ? 0.0 : h;
}

double entropy_mle(std::span<const std::uint8_t> fragment) {
    if (fragment.empty()) throw ArgumentError("entropy_mle: empty fragment");
    return entropy_mle(features::byte_histogram(fragment));
}

}  // namespace encod::randomness
