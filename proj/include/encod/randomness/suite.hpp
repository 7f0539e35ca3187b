#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "encod/randomness/nist.hpp"

namespace encod::randomness {

/// Extension point for bit-level randomness tests taking part in the vote.
class RandomnessTest {
public:
    virtual ~RandomnessTest() = default;
    virtual std::string id() const = 0;
    virtual std::size_t min_bits(const NistParams& params) const = 0;
    virtual TestResult run(const BitSequence& bits, const NistParams& params) const = 0;
};

/// Built-in test ids: monobit, block_frequency, runs, longest_run, cusum,
/// approx_entropy, serial.
std::vector<std::string> builtin_test_ids();
/// Throws ArgumentError for an unknown id.
std::shared_ptr<const RandomnessTest> make_builtin_test(std::string_view id);

struct SuiteConfig {
    std::vector<std::shared_ptr<const RandomnessTest>> tests;
    NistParams params;

    /// All seven built-in tests with default parameters.
    static SuiteConfig defaults();
    static SuiteConfig from_ids(const std::vector<std::string>& ids, NistParams params = {});
};

enum class Verdict { random, non_random };
std::string_view to_string(Verdict v);

struct SuiteVerdict {
    std::vector<TestResult> results;
    Verdict verdict = Verdict::non_random;
    int votes_for = 0;
    int votes_against = 0;
};

/// Runs every configured test; tests shorter than their minimum length are
/// reported inapplicable and do not vote. Random iff strictly more applicable
/// tests pass than fail (ties and empty votes are non_random).
SuiteVerdict nist_majority_vote(std::span<const std::uint8_t> fragment, const SuiteConfig& config);
SuiteVerdict nist_majority_vote(const BitSequence& bits, const SuiteConfig& config);
/// Applies the vote rule to finished results.
SuiteVerdict tally_votes(std::vector<TestResult> results);

}  // namespace encod::randomness
