#pragma once

#include <optional>
#include <string>

namespace encod::randomness {

/// Outcome of a single randomness test on one fragment. `passed` means
/// "looks random". When `applicable` is false the test could not be run
/// meaningfully and `passed` must be ignored.
struct TestResult {
    std::string test_id;
    double statistic = 0.0;
    std::optional<double> p_value;
    bool passed = false;
    bool applicable = true;
};

}  // namespace encod::randomness
