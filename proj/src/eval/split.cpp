#include "encod/eval/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "encod/error.hpp"

namespace encod::eval {

void SplitSpec::validate() const {
    if (train < 0.0 || dev < 0.0 || test < 0.0) throw ArgumentError("split ratios must be non-negative");
    if (std::fabs(train + dev + test - 1.0) > 1e-9) throw ArgumentError("split ratios must sum to 1");
}

namespace {

bool canonical_less(const corpus::ManifestEntry& a, const corpus::ManifestEntry& b) {
    if (a.label != b.label) return a.label < b.label;
    if (a.size != b.size) return a.size < b.size;
    if (a.path != b.path) return a.path < b.path;
    return a.offset < b.offset;
}

}  // namespace

DatasetSplit split_dataset(const std::vector<corpus::ManifestEntry>& entries, const SplitSpec& spec) {
    spec.validate();
    if (entries.empty()) throw DataError("cannot split an empty dataset");

    std::map<std::pair<int, std::size_t>, std::vector<corpus::ManifestEntry>> groups;
    for (const auto& e : entries) {
        const auto key = spec.stratified ? std::make_pair(static_cast<int>(e.label), e.size) : std::make_pair(0, std::size_t{0});
        groups[key].push_back(e);
    }

    DatasetSplit out;
    for (auto& [key, group] : groups) {
        if (group.size() < 3)
            throw DataError("split: class '" +
                            (spec.stratified ? std::string(corpus::to_string(static_cast<corpus::CodecLabel>(key.first))) +
                                                   "' at size " + std::to_string(key.second)
                                             : std::string("all'")) +
                            " has only " + std::to_string(group.size()) + " samples (need at least 3)");
        // Start from a canonical order so the result ignores input ordering.
        std::sort(group.begin(), group.end(), canonical_less);
        std::mt19937_64 rng(spec.seed ^ (static_cast<std::uint64_t>(key.first) << 32) ^ key.second);
        std::shuffle(group.begin(), group.end(), rng);
        const auto n = static_cast<double>(group.size());
        const auto n_test = static_cast<std::size_t>(std::llround(n * spec.test));
        const auto n_dev = static_cast<std::size_t>(std::llround(n * spec.dev));
        if (n_test + n_dev > group.size()) throw DataError("split: ratios leave no training samples");
        out.test.insert(out.test.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(n_test));
        out.dev.insert(out.dev.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test),
                       group.begin() + static_cast<std::ptrdiff_t>(n_test + n_dev));
        out.train.insert(out.train.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test + n_dev), group.end());
    }
    for (auto* part : {&out.train, &out.dev, &out.test}) std::sort(part->begin(), part->end(), canonical_less);
    return out;
}

ManifestSplit split_manifest(const corpus::Manifest& manifest, const SplitSpec& spec) {
    const DatasetSplit parts = split_dataset(manifest.entries, spec);
    ManifestSplit out{manifest, manifest, manifest};
    out.train.entries = parts.train;
    out.dev.entries = parts.dev;
    out.test.entries = parts.test;
    return out;
}

}  // namespace encod::eval
