#pragma once

#include <cstdint>
#include <vector>

#include "encod/corpus/manifest.hpp"

namespace encod::eval {

struct SplitSpec {
    double train = 0.85;
    double dev = 0.05;
    double test = 0.10;
    std::uint64_t seed = 1;
    bool stratified = true;

    /// Throws ArgumentError unless the ratios are non-negative and sum to 1.
    void validate() const;
};

struct DatasetSplit {
    std::vector<corpus::ManifestEntry> train;
    std::vector<corpus::ManifestEntry> dev;
    std::vector<corpus::ManifestEntry> test;
};

/// Disjoint, exhaustive split. When stratified, each (label, size) group is
/// shuffled with the seed and cut by the ratios (test and dev rounded, train
/// takes the rest). Throws DataError on an empty input or a group with fewer
/// than three samples.
DatasetSplit split_dataset(const std::vector<corpus::ManifestEntry>& entries, const SplitSpec& spec);

/// Same, producing three manifests that inherit the source header.
struct ManifestSplit {
    corpus::Manifest train, dev, test;
};
ManifestSplit split_manifest(const corpus::Manifest& manifest, const SplitSpec& spec);

}  // namespace encod::eval
