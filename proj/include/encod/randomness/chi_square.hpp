#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "encod/randomness/test_result.hpp"

namespace encod::randomness {

inline constexpr int kChiSquareDf = 255;

/// Goodness of fit of the byte counts against the uniform distribution,
/// E_i = L / 256. Throws ArgumentError on empty input.
double chi_square_stat(std::span<const std::uint8_t> fragment);

struct ChiMoments {
    double mu = 0.0;
    double sigma = 0.0;
};

/// Per-size mean/std of chi-square over encrypted fragments; the absolute
/// test accepts |chi2 - mu| <= k * sigma.
struct ChiSquareCalibration {
    std::map<std::size_t, ChiMoments> by_size;
    double k = 2.0;

    /// Throws ConfigError for an uncalibrated size.
    const ChiMoments& at(std::size_t size) const;
};

/// Needs >= 100 fragments per size and a positive spread (ConfigError otherwise).
ChiSquareCalibration calibrate_chi_abs(
    const std::map<std::size_t, std::vector<std::vector<std::uint8_t>>>& encrypted_by_size,
    double k = 2.0);
/// Same, from precomputed statistics.
ChiSquareCalibration calibrate_chi_abs_from_stats(
    const std::map<std::size_t, std::vector<double>>& stats_by_size, double k = 2.0);

TestResult chi_abs_test(std::span<const std::uint8_t> fragment, const ChiSquareCalibration& cal);
TestResult chi_abs_test_stat(double stat, std::size_t size, const ChiSquareCalibration& cal);

/// Passes when the chi-square percentile (df 255) lies in [0.01, 0.99].
/// p_value holds the upper-tail probability 1 - percentile.
TestResult chi_ci_test(std::span<const std::uint8_t> fragment);
TestResult chi_ci_test_stat(double stat);

std::string calibration_to_json(const ChiSquareCalibration& cal);
ChiSquareCalibration calibration_from_json(const std::string& text);

}  // namespace encod::randomness
