#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace encod::eval {

/// A detector under timing. The returned value is folded into a sink so the
/// work cannot be optimized away.
struct BenchTarget {
    std::string name;
    std::function<int(std::span<const std::uint8_t>)> run;
};

struct BenchmarkRow {
    std::string name;
    double mean = 0.0;  ///< seconds per sample
    double median = 0.0;
    double stddev = 0.0;
    std::size_t samples = 0;
    std::size_t repetitions = 0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    std::uint64_t sink = 0;

    const BenchmarkRow& row(const std::string& name) const;
    void write_csv(std::ostream& out) const;
};

struct BenchmarkOptions {
    std::size_t repetitions = 10;
    std::size_t warmup_passes = 1;
};

/// Times each target on every fragment individually, single-threaded, with a
/// monotonic clock. Warm-up passes are not recorded.
/// Throws ArgumentError with fewer than 100 fragments or 10 repetitions.
BenchmarkReport benchmark(const std::vector<BenchTarget>& targets,
                          const std::vector<std::vector<std::uint8_t>>& fragments,
                          const BenchmarkOptions& options = {});

}  // namespace encod::eval
