#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "encod/corpus/manifest.hpp"

namespace encod::eval {

struct EntropyProfileRow {
    std::string label;
    std::size_t size = 0;
    std::size_t count = 0;
    double min = 0.0;
    double p5 = 0.0;
    double median = 0.0;
    double p95 = 0.0;
    double max = 0.0;
};

/// Linear-interpolated percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

EntropyProfileRow summarize_entropies(const std::string& label, std::size_t size, std::vector<double> values);

/// One row per (label, size), in label then size order. Throws DataError when empty.
std::vector<EntropyProfileRow> entropy_profile(const corpus::Manifest& manifest, unsigned jobs = 1);

void write_entropy_profile_csv(std::ostream& out, std::span<const EntropyProfileRow> rows);

}  // namespace encod::eval
