#include "encod/randomness/nist.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "encod/error.hpp"
#include "encod/randomness/special_functions.hpp"

namespace encod::randomness {
namespace {

TestResult make_result(std::string id, double statistic, double p, double alpha, bool applicable) {
    TestResult r;
    r.test_id = std::move(id);
    r.statistic = statistic;
    r.p_value = std::clamp(p, 0.0, 1.0);
    r.passed = *r.p_value >= alpha;
    r.applicable = applicable;
    return r;
}

TestResult undefined_result(std::string id) {
    TestResult r;
    r.test_id = std::move(id);
    r.applicable = false;
    return r;
}

/// Occurrences of every m-bit pattern over the n overlapping windows, with the
/// sequence wrapped around by m - 1 bits.
std::vector<std::uint32_t> pattern_counts(const BitSequence& bits, int m) {
    const std::size_t n = bits.size();
    std::vector<std::uint32_t> counts(std::size_t{1} << m, 0);
    if (m == 0 || n == 0) {
        counts[0] = static_cast<std::uint32_t>(n);
        return counts;
    }
    const std::uint32_t mask = (std::uint32_t{1} << m) - 1;
    std::uint32_t window = 0;
    for (int i = 0; i < m - 1; ++i) window = (window << 1) | bits[static_cast<std::size_t>(i) % n];
    for (std::size_t i = 0; i < n; ++i) {
        window = ((window << 1) | bits[(i + static_cast<std::size_t>(m) - 1) % n]) & mask;
        ++counts[window];
    }
    return counts;
}

double cusum_p_value(long long n, long long z) {
    // Same summation bounds (integer division) as the NIST reference code.
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double sum1 = 0.0;
    for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
        sum1 += normal_cdf(static_cast<double>((4 * k + 1) * z) / sqrt_n);
        sum1 -= normal_cdf(static_cast<double>((4 * k - 1) * z) / sqrt_n);
    }
    double sum2 = 0.0;
    for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
        sum2 += normal_cdf(static_cast<double>((4 * k + 3) * z) / sqrt_n);
        sum2 -= normal_cdf(static_cast<double>((4 * k + 1) * z) / sqrt_n);
    }
    return 1.0 - sum1 + sum2;
}

TestResult fold_pair(std::string id, const TestResult& a, const TestResult& b, double alpha, bool require_both) {
    TestResult r;
    r.test_id = std::move(id);
    r.applicable = a.applicable && b.applicable;
    r.statistic = std::max(a.statistic, b.statistic);
    if (a.p_value && b.p_value) r.p_value = std::min(*a.p_value, *b.p_value);
    const bool pa = a.p_value && *a.p_value >= alpha;
    const bool pb = b.p_value && *b.p_value >= alpha;
    r.passed = require_both ? (pa && pb) : (pa || pb);
    return r;
}

}  // namespace

BitSequence BitSequence::from_bytes(std::span<const std::uint8_t> bytes) {
    BitSequence s;
    s.bits_.resize(bytes.size() * 8);
    std::uint8_t* out = s.bits_.data();
    for (std::uint8_t b : bytes)
        for (int k = 7; k >= 0; --k) *out++ = static_cast<std::uint8_t>((b >> k) & 1);
    return s;
}

BitSequence BitSequence::from_string(std::string_view digits) {
    BitSequence s;
    s.bits_.reserve(digits.size());
    for (char c : digits) {
        if (c != '0' && c != '1') throw ArgumentError("bit string may only contain '0' and '1'");
        s.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return s;
}

BitSequence BitSequence::reversed() const {
    BitSequence s;
    s.bits_.assign(bits_.rbegin(), bits_.rend());
    return s;
}

std::size_t monobit_min_bits() { return 100; }
std::size_t block_frequency_min_bits(std::size_t block_bits) { return std::max<std::size_t>(100, block_bits); }
std::size_t runs_min_bits() { return 100; }
std::size_t longest_run_min_bits() { return 128; }
std::size_t cusum_min_bits() { return 100; }
std::size_t approx_entropy_min_bits(int m) { return std::size_t{1} << (m + 6); }
std::size_t serial_min_bits(int m) { return std::size_t{1} << (m + 3); }

TestResult nist_monobit(const BitSequence& bits, double alpha) {
    const std::size_t n = bits.size();
    if (n == 0) return undefined_result("monobit");
    long long s = 0;
    for (std::uint8_t b : bits.bits()) s += b ? 1 : -1;
    const double s_obs = std::fabs(static_cast<double>(s)) / std::sqrt(static_cast<double>(n));
    const double p = std::erfc(s_obs / std::sqrt(2.0));
    return make_result("monobit", s_obs, p, alpha, n >= monobit_min_bits());
}

TestResult nist_block_frequency(const BitSequence& bits, std::size_t block_bits, double alpha) {
    if (block_bits == 0) throw ArgumentError("block frequency: block length must be positive");
    const std::size_t n = bits.size();
    const std::size_t blocks = n / block_bits;
    if (blocks == 0) return undefined_result("block_frequency");
    double sum = 0.0;
    const auto b = bits.bits();
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < block_bits; ++j) ones += b[i * block_bits + j];
        const double pi = static_cast<double>(ones) / static_cast<double>(block_bits) - 0.5;
        sum += pi * pi;
    }
    const double chi2 = 4.0 * static_cast<double>(block_bits) * sum;
    const double p = gamma_q(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
    return make_result("block_frequency", chi2, p, alpha, n >= block_frequency_min_bits(block_bits));
}

TestResult nist_runs(const BitSequence& bits, double alpha) {
    const std::size_t n = bits.size();
    if (n < 2) return undefined_result("runs");
    const auto b = bits.bits();
    std::size_t ones = 0;
    for (std::uint8_t x : b) ones += x;
    const double nd = static_cast<double>(n);
    const double pi = static_cast<double>(ones) / nd;
    const bool applicable = n >= runs_min_bits();
    // Frequency pre-test: the runs statistic is meaningless for a badly biased sequence.
    if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(nd)) return make_result("runs", 0.0, 0.0, alpha, applicable);
    std::size_t v = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) v += b[k] != b[k + 1];
    const double num = std::fabs(static_cast<double>(v) - 2.0 * nd * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * nd) * pi * (1.0 - pi);
    return make_result("runs", static_cast<double>(v), std::erfc(num / den), alpha, applicable);
}

TestResult nist_longest_run(const BitSequence& bits, double alpha) {
    const std::size_t n = bits.size();
    if (n < longest_run_min_bits()) return undefined_result("longest_run");

    std::size_t m;
    int lo;  // longest-run value of the first class (and everything below)
    std::vector<double> pi;
    if (n < 6272) {
        m = 8;
        lo = 1;
        pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    } else if (n < 750000) {
        m = 128;
        lo = 4;
        pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
    } else {
        m = 10000;
        lo = 10;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    const std::size_t classes = pi.size();
    const std::size_t blocks = n / m;
    std::vector<std::size_t> nu(classes, 0);
    const auto b = bits.bits();
    for (std::size_t i = 0; i < blocks; ++i) {
        int run = 0;
        int longest = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (b[i * m + j]) {
                longest = std::max(longest, ++run);
            } else {
                run = 0;
            }
        }
        const int cls = std::clamp(longest - lo, 0, static_cast<int>(classes) - 1);
        ++nu[static_cast<std::size_t>(cls)];
    }
    double chi2 = 0.0;
    const double nb = static_cast<double>(blocks);
    for (std::size_t i = 0; i < classes; ++i) {
        const double e = nb * pi[i];
        chi2 += (static_cast<double>(nu[i]) - e) * (static_cast<double>(nu[i]) - e) / e;
    }
    const double k = static_cast<double>(classes - 1);
    return make_result("longest_run", chi2, gamma_q(k / 2.0, chi2 / 2.0), alpha, true);
}

TestResult nist_cusum(const BitSequence& bits, CusumMode mode, double alpha) {
    const std::string id = mode == CusumMode::forward ? "cusum_forward" : "cusum_backward";
    const std::size_t n = bits.size();
    if (n == 0) return undefined_result(id);
    const auto b = bits.bits();
    long long s = 0;
    long long z = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t bit = mode == CusumMode::forward ? b[i] : b[n - 1 - i];
        s += bit ? 1 : -1;
        z = std::max(z, s < 0 ? -s : s);
    }
    const double p = cusum_p_value(static_cast<long long>(n), z);
    return make_result(id, static_cast<double>(z), p, alpha, n >= cusum_min_bits());
}

TestResult nist_cusum_combined(const BitSequence& bits, double alpha, bool require_both) {
    return fold_pair("cusum", nist_cusum(bits, CusumMode::forward, alpha), nist_cusum(bits, CusumMode::backward, alpha),
                     alpha, require_both);
}

TestResult nist_approx_entropy(const BitSequence& bits, int m, double alpha) {
    if (m < 1 || m > 20) throw ArgumentError("approximate entropy: m must be in [1, 20]");
    const std::size_t n = bits.size();
    if (n == 0) return undefined_result("approx_entropy");
    const double nd = static_cast<double>(n);
    auto phi = [&](int len) {
        double sum = 0.0;
        for (std::uint32_t c : pattern_counts(bits, len))
            if (c) {
                const double p = static_cast<double>(c) / nd;
                sum += p * std::log(p);
            }
        return sum;
    };
    const double ap_en = phi(m) - phi(m + 1);
    const double chi2 = std::max(0.0, 2.0 * nd * (std::log(2.0) - ap_en));
    const double p = gamma_q(std::ldexp(1.0, m - 1), chi2 / 2.0);
    return make_result("approx_entropy", chi2, p, alpha, n >= approx_entropy_min_bits(m));
}

TestResult nist_serial(const BitSequence& bits, int m, double alpha) {
    if (m < 2 || m > 20) throw ArgumentError("serial: m must be in [2, 20]");
    const std::size_t n = bits.size();
    if (n == 0) return undefined_result("serial");
    const double nd = static_cast<double>(n);
    auto psi2 = [&](int len) {
        if (len <= 0) return 0.0;
        double sum = 0.0;
        for (std::uint32_t c : pattern_counts(bits, len)) sum += static_cast<double>(c) * static_cast<double>(c);
        return std::ldexp(1.0, len) / nd * sum - nd;
    };
    const double p0 = psi2(m);
    const double p1 = psi2(m - 1);
    const double p2 = psi2(m - 2);
    const double del1 = std::max(0.0, p0 - p1);
    const double del2 = std::max(0.0, p0 - 2.0 * p1 + p2);
    const bool applicable = n >= serial_min_bits(m);
    const TestResult first = make_result("serial_1", del1, gamma_q(std::ldexp(1.0, m - 2), del1 / 2.0), alpha, applicable);
    const TestResult second = make_result("serial_2", del2, gamma_q(std::ldexp(1.0, m - 3), del2 / 2.0), alpha, applicable);
    TestResult r = fold_pair("serial", first, second, alpha, true);
    r.statistic = del1;
    return r;
}

}  // namespace encod::randomness
