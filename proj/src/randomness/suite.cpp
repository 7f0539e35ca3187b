#include "encod/randomness/suite.hpp"

#include <functional>

#include "encod/error.hpp"

namespace encod::randomness {
namespace {

class BuiltinTest final : public RandomnessTest {
public:
    using MinFn = std::function<std::size_t(const NistParams&)>;
    using RunFn = std::function<TestResult(const BitSequence&, const NistParams&)>;

    BuiltinTest(std::string id, MinFn min, RunFn run) : id_(std::move(id)), min_(std::move(min)), run_(std::move(run)) {}

    std::string id() const override { return id_; }
    std::size_t min_bits(const NistParams& params) const override { return min_(params); }
    TestResult run(const BitSequence& bits, const NistParams& params) const override { return run_(bits, params); }

private:
    std::string id_;
    MinFn min_;
    RunFn run_;
};

}  // namespace

std::vector<std::string> builtin_test_ids() {
    return {"monobit", "block_frequency", "runs", "longest_run", "cusum", "approx_entropy", "serial"};
}

std::shared_ptr<const RandomnessTest> make_builtin_test(std::string_view id) {
    if (id == "monobit")
        return std::make_shared<BuiltinTest>(
            "monobit", [](const NistParams&) { return monobit_min_bits(); },
            [](const BitSequence& b, const NistParams& p) { return nist_monobit(b, p.alpha); });
    if (id == "block_frequency")
        return std::make_shared<BuiltinTest>(
            "block_frequency", [](const NistParams& p) { return block_frequency_min_bits(p.block_frequency_m); },
            [](const BitSequence& b, const NistParams& p) { return nist_block_frequency(b, p.block_frequency_m, p.alpha); });
    if (id == "runs")
        return std::make_shared<BuiltinTest>(
            "runs", [](const NistParams&) { return runs_min_bits(); },
            [](const BitSequence& b, const NistParams& p) { return nist_runs(b, p.alpha); });
    if (id == "longest_run")
        return std::make_shared<BuiltinTest>(
            "longest_run", [](const NistParams&) { return longest_run_min_bits(); },
            [](const BitSequence& b, const NistParams& p) { return nist_longest_run(b, p.alpha); });
    if (id == "cusum")
        return std::make_shared<BuiltinTest>(
            "cusum", [](const NistParams&) { return cusum_min_bits(); },
            [](const BitSequence& b, const NistParams& p) { return nist_cusum_combined(b, p.alpha, true); });
    if (id == "approx_entropy")
        return std::make_shared<BuiltinTest>(
            "approx_entropy", [](const NistParams& p) { return approx_entropy_min_bits(p.approx_entropy_m); },
            [](const BitSequence& b, const NistParams& p) { return nist_approx_entropy(b, p.approx_entropy_m, p.alpha); });
    if (id == "serial")
        return std::make_shared<BuiltinTest>(
            "serial", [](const NistParams& p) { return serial_min_bits(p.serial_m); },
            [](const BitSequence& b, const NistParams& p) { return nist_serial(b, p.serial_m, p.alpha); });
    throw ArgumentError("unknown randomness test '" + std::string(id) + "'");
}

SuiteConfig SuiteConfig::defaults() { return from_ids(builtin_test_ids()); }

SuiteConfig SuiteConfig::from_ids(const std::vector<std::string>& ids, NistParams params) {
    SuiteConfig c;
    c.params = params;
    for (const auto& id : ids) c.tests.push_back(make_builtin_test(id));
    return c;
}

std::string_view to_string(Verdict v) { return v == Verdict::random ? "random" : "non_random"; }

SuiteVerdict tally_votes(std::vector<TestResult> results) {
    SuiteVerdict v;
    for (const auto& r : results) {
        if (!r.applicable) continue;
        (r.passed ? v.votes_for : v.votes_against) += 1;
    }
    v.verdict = v.votes_for > v.votes_against ? Verdict::random : Verdict::non_random;
    v.results = std::move(results);
    return v;
}

SuiteVerdict nist_majority_vote(const BitSequence& bits, const SuiteConfig& config) {
    std::vector<TestResult> results;
    results.reserve(config.tests.size());
    for (const auto& t : config.tests) {
        if (bits.size() < t->min_bits(config.params)) {
            // Below the minimum length the test is not run at all.
            TestResult r;
            r.test_id = t->id();
            r.applicable = false;
            results.push_back(std::move(r));
            continue;
        }
        TestResult r = t->run(bits, config.params);
        r.test_id = t->id();
        results.push_back(std::move(r));
    }
    return tally_votes(std::move(results));
}

SuiteVerdict nist_majority_vote(std::span<const std::uint8_t> fragment, const SuiteConfig& config) {
    return nist_majority_vote(BitSequence::from_bytes(fragment), config);
}

}  // namespace encod::randomness
