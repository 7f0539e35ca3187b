#include "encod/randomness/chi_square.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "encod/error.hpp"
#include "encod/features/histogram.hpp"
#include "encod/randomness/special_functions.hpp"

namespace encod::randomness {

namespace {
constexpr std::size_t kMinCalibrationFragments = 100;
constexpr double kCiLow = 0.01;
constexpr double kCiHigh = 0.99;
}  // namespace

double chi_square_stat(std::span<const std::uint8_t> fragment) {
    if (fragment.empty()) throw ArgumentError("chi_square_stat: empty fragment");
    const auto counts = features::byte_counts(fragment);
    const double expected = static_cast<double>(fragment.size()) / 256.0;
    double stat = 0.0;
    for (std::uint32_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d;
    }
    return stat / expected;
}

const ChiMoments& ChiSquareCalibration::at(std::size_t size) const {
    const auto it = by_size.find(size);
    if (it == by_size.end())
        throw ConfigError("no chi-square calibration for fragment size " + std::to_string(size));
    return it->second;
}

ChiSquareCalibration calibrate_chi_abs_from_stats(const std::map<std::size_t, std::vector<double>>& stats_by_size,
                                                  double k) {
    if (!(k > 0.0)) throw ConfigError("chi-square window multiplier must be positive");
    if (stats_by_size.empty()) throw ConfigError("chi-square calibration needs at least one size");
    ChiSquareCalibration cal;
    cal.k = k;
    for (const auto& [size, stats] : stats_by_size) {
        if (stats.size() < kMinCalibrationFragments)
            throw ConfigError("chi-square calibration for size " + std::to_string(size) + " has " +
                              std::to_string(stats.size()) + " fragments; at least 100 are required");
        double mean = 0.0;
        for (double s : stats) mean += s;
        mean /= static_cast<double>(stats.size());
        double var = 0.0;
        for (double s : stats) var += (s - mean) * (s - mean);
        var /= static_cast<double>(stats.size() - 1);
        const double sigma = std::sqrt(var);
        if (!(sigma > 0.0))
            throw ConfigError("chi-square calibration for size " + std::to_string(size) +
                              " has zero spread; the samples are degenerate");
        cal.by_size[size] = ChiMoments{mean, sigma};
    }
    return cal;
}

ChiSquareCalibration calibrate_chi_abs(
    const std::map<std::size_t, std::vector<std::vector<std::uint8_t>>>& encrypted_by_size, double k) {
    std::map<std::size_t, std::vector<double>> stats;
    for (const auto& [size, frags] : encrypted_by_size) {
        auto& out = stats[size];
        out.reserve(frags.size());
        for (const auto& f : frags) out.push_back(chi_square_stat(f));
    }
    return calibrate_chi_abs_from_stats(stats, k);
}

TestResult chi_abs_test_stat(double stat, std::size_t size, const ChiSquareCalibration& cal) {
    const ChiMoments& m = cal.at(size);
    TestResult r;
    r.test_id = "chi_abs";
    r.statistic = stat;
    r.passed = std::fabs(stat - m.mu) <= cal.k * m.sigma;
    return r;
}

TestResult chi_abs_test(std::span<const std::uint8_t> fragment, const ChiSquareCalibration& cal) {
    return chi_abs_test_stat(chi_square_stat(fragment), fragment.size(), cal);
}

TestResult chi_ci_test_stat(double stat) {
    const double percentile = chi_square_cdf(stat, kChiSquareDf);
    TestResult r;
    r.test_id = "chi_ci";
    r.statistic = stat;
    r.p_value = 1.0 - percentile;
    r.passed = percentile >= kCiLow && percentile <= kCiHigh;
    return r;
}

TestResult chi_ci_test(std::span<const std::uint8_t> fragment) { return chi_ci_test_stat(chi_square_stat(fragment)); }

std::string calibration_to_json(const ChiSquareCalibration& cal) {
    // The window multiplier is a detector setting, not part of the calibration.
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [size, m] : cal.by_size) j[std::to_string(size)] = {{"mu", m.mu}, {"sigma", m.sigma}};
    return j.dump(2);
}

ChiSquareCalibration calibration_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ChiSquareCalibration cal;
        if (!j.is_object() || j.empty()) throw ConfigError("chi-square calibration must be a non-empty object");
        for (const auto& [size, m] : j.items()) {
            const ChiMoments mom{m.at("mu").get<double>(), m.at("sigma").get<double>()};
            if (!(mom.sigma > 0.0)) throw ConfigError("calibration for size " + size + " has non-positive sigma");
            std::size_t parsed = 0;
            const auto value = std::stoul(size, &parsed);
            if (parsed != size.size()) throw ConfigError("calibration key '" + size + "' is not a fragment size");
            cal.by_size[value] = mom;
        }
        return cal;
    } catch (const std::invalid_argument&) {
        throw ConfigError("calibration keys must be fragment sizes");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed chi-square calibration: ") + e.what());
    }
}

}  // namespace encod::randomness
