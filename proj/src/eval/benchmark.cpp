#include "encod/eval/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "encod/error.hpp"

namespace encod::eval {

namespace {
constexpr std::size_t kMinFragments = 100;
constexpr std::size_t kMinRepetitions = 10;
}  // namespace

const BenchmarkRow& BenchmarkReport::row(const std::string& name) const {
    for (const auto& r : rows)
        if (r.name == name) return r;
    throw ArgumentError("no benchmark row named '" + name + "'");
}

void BenchmarkReport::write_csv(std::ostream& out) const {
    out << "approach,mean_s,median_s,stddev_s,samples,repetitions\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,%zu,%zu\n", r.name.c_str(), r.mean, r.median, r.stddev,
                      r.samples, r.repetitions);
        out << buf;
    }
}

BenchmarkReport benchmark(const std::vector<BenchTarget>& targets,
                          const std::vector<std::vector<std::uint8_t>>& fragments, const BenchmarkOptions& options) {
    if (fragments.size() < kMinFragments)
        throw ArgumentError("benchmark needs at least 100 fragments, got " + std::to_string(fragments.size()));
    if (options.repetitions < kMinRepetitions)
        throw ArgumentError("benchmark needs at least 10 repetitions, got " + std::to_string(options.repetitions));
    using clock = std::chrono::steady_clock;

    BenchmarkReport report;
    std::uint64_t sink = 0;
    for (const auto& t : targets) {
        for (std::size_t w = 0; w < options.warmup_passes; ++w)
            for (const auto& f : fragments) sink += static_cast<std::uint64_t>(t.run(f));

        std::vector<double> times;
        times.reserve(fragments.size() * options.repetitions);
        for (std::size_t rep = 0; rep < options.repetitions; ++rep)
            for (const auto& f : fragments) {
                const auto start = clock::now();
                sink += static_cast<std::uint64_t>(t.run(f));
                const auto stop = clock::now();
                times.push_back(std::chrono::duration<double>(stop - start).count());
            }

        BenchmarkRow row;
        row.name = t.name;
        row.samples = fragments.size();
        row.repetitions = options.repetitions;
        double sum = 0.0;
        for (double x : times) sum += x;
        row.mean = sum / static_cast<double>(times.size());
        double var = 0.0;
        for (double x : times) var += (x - row.mean) * (x - row.mean);
        row.stddev = times.size() > 1 ? std::sqrt(var / static_cast<double>(times.size() - 1)) : 0.0;
        auto mid = times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2);
        std::nth_element(times.begin(), mid, times.end());
        row.median = *mid;
        if (times.size() % 2 == 0) row.median = 0.5 * (row.median + *std::max_element(times.begin(), mid));
        report.rows.push_back(row);
    }
    report.sink = sink;
    return report;
}

}  // namespace encod::eval
