#pragma once

#include <array>
#include <span>
#include <vector>

#include "encod/features/histogram.hpp"

namespace encod::features {

/// Per-dimension MinMax scaler onto [0, 2].
struct ScalerParams {
    static constexpr double kTargetLow = 0.0;
    static constexpr double kTargetHigh = 2.0;

    std::array<double, kFeatureWidth> min{};
    std::array<double, kFeatureWidth> max{};

    bool operator==(const ScalerParams&) const = default;
};

using ScaledVector = std::array<double, kFeatureWidth>;

/// Per-dimension extrema of the training vectors. Throws ArgumentError when empty.
ScalerParams fit_scaler(std::span<const FeatureVector> training);

/// out = 2 (v - min) / (max - min); constant dimensions map to 0. Not clipped.
ScaledVector apply_scaler(const FeatureVector& v, const ScalerParams& params);
/// Float variant writing straight into a network input row.
void apply_scaler(const FeatureVector& v, const ScalerParams& params, std::span<float> out);

/// Inverse on non-constant dimensions; constant dimensions return min.
FeatureVector invert_scaler(const ScaledVector& scaled, const ScalerParams& params);

}  // namespace encod::features
