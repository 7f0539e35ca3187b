#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "encod/corpus/manifest.hpp"
#include "encod/eval/metrics.hpp"
#include "encod/models/bundle.hpp"

namespace encod::eval {

/// Classifies every entry whose label the bundle covers and tallies the
/// result. Throws DataError on an empty test set or a size mismatch.
Metrics evaluate_model(const models::ModelBundle& bundle, const corpus::Manifest& test, unsigned jobs = 1);
Metrics evaluate_model(const models::ModelBundle& bundle, const corpus::Manifest& manifest,
                       const std::vector<corpus::ManifestEntry>& entries, unsigned jobs = 1);

/// Multi-class bundle scored as encrypted vs compressed after the argmax collapse.
Metrics evaluate_binarized(const models::ModelBundle& bundle, const corpus::Manifest& manifest,
                           const std::vector<corpus::ManifestEntry>& entries, unsigned jobs = 1);

inline const std::vector<std::string> kBinaryLabels = {"encrypted", "compressed"};

}  // namespace encod::eval
