#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "encod/randomness/test_result.hpp"

namespace encod::randomness {

/// Bit sequence with one byte per bit (0 or 1), like the NIST reference tooling.
class BitSequence {
public:
    BitSequence() = default;
    /// Each byte expands most-significant bit first.
    static BitSequence from_bytes(std::span<const std::uint8_t> bytes);
    /// Characters '0' and '1'; anything else throws ArgumentError.
    static BitSequence from_string(std::string_view digits);

    std::size_t size() const { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::span<const std::uint8_t> bits() const { return bits_; }

    BitSequence reversed() const;

private:
    std::vector<std::uint8_t> bits_;
};

inline constexpr double kDefaultAlpha = 0.01;

struct NistParams {
    double alpha = kDefaultAlpha;
    std::size_t block_frequency_m = 128;
    int approx_entropy_m = 2;
    int serial_m = 2;
};

enum class CusumMode { forward, backward };

// Each test fills statistic and p_value whenever the arithmetic is defined and
// sets applicable = false below its minimum length.

TestResult nist_monobit(const BitSequence& bits, double alpha = kDefaultAlpha);
TestResult nist_block_frequency(const BitSequence& bits, std::size_t block_bits = 128,
                                double alpha = kDefaultAlpha);
TestResult nist_runs(const BitSequence& bits, double alpha = kDefaultAlpha);
TestResult nist_longest_run(const BitSequence& bits, double alpha = kDefaultAlpha);
TestResult nist_cusum(const BitSequence& bits, CusumMode mode, double alpha = kDefaultAlpha);
/// Both cusum modes reported as one test: p_value is the smaller of the two and
/// the test passes only if both pass (or either, with require_both = false).
TestResult nist_cusum_combined(const BitSequence& bits, double alpha = kDefaultAlpha,
                               bool require_both = true);
TestResult nist_approx_entropy(const BitSequence& bits, int m = 2, double alpha = kDefaultAlpha);
/// Serial test; the two p-values are folded as in nist_cusum_combined.
TestResult nist_serial(const BitSequence& bits, int m = 2, double alpha = kDefaultAlpha);

/// Minimum sequence lengths, in bits.
std::size_t monobit_min_bits();
std::size_t block_frequency_min_bits(std::size_t block_bits);
std::size_t runs_min_bits();
std::size_t longest_run_min_bits();
std::size_t cusum_min_bits();
std::size_t approx_entropy_min_bits(int m);
std::size_t serial_min_bits(int m);

}  // namespace encod::randomness
