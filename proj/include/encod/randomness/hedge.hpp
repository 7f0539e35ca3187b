#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "encod/randomness/chi_square.hpp"
#include "encod/randomness/nist.hpp"

namespace encod::randomness {

struct HedgeConfig {
    ChiSquareCalibration calibration;
    NistParams params;
    /// Cumulative sums counts as one component; require both directions to pass.
    bool cusum_require_both = true;
};

struct HedgeReport {
    TestResult verdict;
    std::vector<TestResult> components;  ///< chi_abs, chi_ci, block_frequency, cusum, approx_entropy
};

/// Random only if the chi-square absolute window, the chi-square confidence
/// interval and the three NIST components all pass.
TestResult hedge(std::span<const std::uint8_t> fragment, const HedgeConfig& config);
HedgeReport hedge_report(std::span<const std::uint8_t> fragment, const HedgeConfig& config);

}  // namespace encod::randomness
