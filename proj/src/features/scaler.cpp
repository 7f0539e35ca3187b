#include "encod/features/scaler.hpp"

#include <algorithm>

#include "encod/error.hpp"

namespace encod::features {

ScalerParams fit_scaler(std::span<const FeatureVector> training) {
    if (training.empty()) throw ArgumentError("fit_scaler: empty training set");
    ScalerParams p;
    p.min = training.front().values;
    p.max = training.front().values;
    for (const auto& v : training.subspan(1))
        for (std::size_t i = 0; i < kFeatureWidth; ++i) {
            p.min[i] = std::min(p.min[i], v.values[i]);
            p.max[i] = std::max(p.max[i], v.values[i]);
        }
    return p;
}

ScaledVector apply_scaler(const FeatureVector& v, const ScalerParams& params) {
    ScaledVector out{};
    const double span = ScalerParams::kTargetHigh - ScalerParams::kTargetLow;
    for (std::size_t i = 0; i < kFeatureWidth; ++i) {
        const double range = params.max[i] - params.min[i];
        out[i] = range > 0.0 ? ScalerParams::kTargetLow + span * (v.values[i] - params.min[i]) / range : 0.0;
    }
    return out;
}

void apply_scaler(const FeatureVector& v, const ScalerParams& params, std::span<float> out) {
    if (out.size() != kFeatureWidth) throw ArgumentError("apply_scaler: output must have 256 slots");
    const ScaledVector s = apply_scaler(v, params);
    for (std::size_t i = 0; i < kFeatureWidth; ++i) out[i] = static_cast<float>(s[i]);
}

FeatureVector invert_scaler(const ScaledVector& scaled, const ScalerParams& params) {
    FeatureVector v;
    const double span = ScalerParams::kTargetHigh - ScalerParams::kTargetLow;
    for (std::size_t i = 0; i < kFeatureWidth; ++i) {
        const double range = params.max[i] - params.min[i];
        v.values[i] = range > 0.0 ? params.min[i] + (scaled[i] - ScalerParams::kTargetLow) * range / span
                                  : params.min[i];
    }
    return v;
}

}  // namespace encod::features
