#include "encod/eval/entropy_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "encod/error.hpp"
#include "encod/randomness/entropy.hpp"
#include "encod/util/parallel.hpp"

namespace encod::eval {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty set");
    if (q < 0.0 || q > 1.0) throw ArgumentError("percentile q must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

EntropyProfileRow summarize_entropies(const std::string& label, std::size_t size, std::vector<double> values) {
    if (values.empty()) throw DataError("no entropies to summarize for " + label);
    std::sort(values.begin(), values.end());
    EntropyProfileRow r;
    r.label = label;
    r.size = size;
    r.count = values.size();
    r.min = values.front();
    r.max = values.back();
    r.p5 = percentile(values, 0.05);
    r.median = percentile(values, 0.5);
    r.p95 = percentile(values, 0.95);
    return r;
}

std::vector<EntropyProfileRow> entropy_profile(const corpus::Manifest& manifest, unsigned jobs) {
    if (manifest.entries.empty()) throw DataError("entropy profile of an empty manifest");
    std::vector<double> h(manifest.entries.size());
    const std::size_t chunks = std::max(1u, jobs);
    util::parallel_for(chunks, jobs, [&](std::size_t chunk) {
        corpus::FragmentReader reader(manifest.base_dir);
        util::Bytes buf;
        const std::size_t begin = h.size() * chunk / chunks;
        const std::size_t end = h.size() * (chunk + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            reader.read_into(manifest.entries[i], buf);
            h[i] = randomness::entropy_mle(buf);
        }
    });
    std::map<std::pair<corpus::CodecLabel, std::size_t>, std::vector<double>> groups;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& e = manifest.entries[i];
        groups[{e.label, e.size}].push_back(h[i]);
    }
    std::vector<EntropyProfileRow> rows;
    for (auto& [key, values] : groups)
        rows.push_back(summarize_entropies(std::string(corpus::to_string(key.first)), key.second, std::move(values)));
    return rows;
}

void write_entropy_profile_csv(std::ostream& out, std::span<const EntropyProfileRow> rows) {
    out << "label,size,count,min,p5,median,p95,max\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.label.c_str(), r.size, r.count,
                      r.min, r.p5, r.median, r.p95, r.max);
        out << buf;
    }
}

}  // namespace encod::eval
