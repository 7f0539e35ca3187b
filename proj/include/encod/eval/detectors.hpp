#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "encod/eval/metrics.hpp"
#include "encod/randomness/chi_square.hpp"
#include "encod/randomness/hedge.hpp"
#include "encod/randomness/suite.hpp"

namespace encod::eval {

enum class DetectorKind { entropy_threshold, chi_abs, chi_ci, nist_vote, hedge };

std::string_view to_string(DetectorKind kind);
DetectorKind detector_from_string(std::string_view name);

struct DetectorContext {
    randomness::ChiSquareCalibration calibration;
    randomness::SuiteConfig suite = randomness::SuiteConfig::defaults();
    randomness::HedgeConfig hedge;
    /// Entropy baseline predicts enc iff entropy > threshold.
    double entropy_threshold = 7.9;
};

struct LabeledFragment {
    std::vector<std::uint8_t> bytes;
    bool encrypted = false;
};

/// True when the detector considers the fragment random (i.e. encrypted).
bool detector_says_random(DetectorKind kind, std::span<const std::uint8_t> fragment,
                          const DetectorContext& ctx);

/// Random verdicts map to "encrypted". Labels default to kBinaryLabels.
Metrics evaluate_detector(DetectorKind kind, const std::vector<LabeledFragment>& fragments,
                          const DetectorContext& ctx,
                          const std::vector<std::string>& labels = {"encrypted", "compressed"},
                          unsigned jobs = 1);

/// Threshold maximizing accuracy on labeled dev fragments (midpoint between
/// neighbouring sorted entropies).
double fit_entropy_threshold(const std::vector<LabeledFragment>& dev);

}  // namespace encod::eval
