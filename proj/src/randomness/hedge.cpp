#include "encod/randomness/hedge.hpp"

#include "encod/error.hpp"

namespace encod::randomness {

HedgeReport hedge_report(std::span<const std::uint8_t> fragment, const HedgeConfig& config) {
    if (fragment.empty()) throw ArgumentError("hedge: empty fragment");
    const double stat = chi_square_stat(fragment);
    const BitSequence bits = BitSequence::from_bytes(fragment);
    const NistParams& p = config.params;

    HedgeReport report;
    report.components.push_back(chi_abs_test_stat(stat, fragment.size(), config.calibration));
    report.components.push_back(chi_ci_test_stat(stat));
    report.components.push_back(nist_block_frequency(bits, p.block_frequency_m, p.alpha));
    report.components.push_back(nist_cusum_combined(bits, p.alpha, config.cusum_require_both));
    report.components.push_back(nist_approx_entropy(bits, p.approx_entropy_m, p.alpha));

    TestResult& v = report.verdict;
    v.test_id = "hedge";
    v.applicable = true;
    v.passed = true;
    int failures = 0;
    for (const auto& c : report.components) {
        v.applicable = v.applicable && c.applicable;
        if (!c.passed) ++failures;
    }
    v.passed = failures == 0;
    v.statistic = failures;
    return report;
}

TestResult hedge(std::span<const std::uint8_t> fragment, const HedgeConfig& config) {
    return hedge_report(fragment, config).verdict;
}

}  // namespace encod::randomness
