#include "encod/eval/detectors.hpp"

#include <algorithm>

#include "encod/error.hpp"
#include "encod/randomness/entropy.hpp"
#include "encod/util/parallel.hpp"

namespace encod::eval {

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::entropy_threshold: return "entropy";
        case DetectorKind::chi_abs: return "chi_abs";
        case DetectorKind::chi_ci: return "chi_ci";
        case DetectorKind::nist_vote: return "nist_vote";
        case DetectorKind::hedge: return "hedge";
    }
    return "?";
}

DetectorKind detector_from_string(std::string_view name) {
    if (name == "entropy" || name == "entropy_threshold") return DetectorKind::entropy_threshold;
    for (auto k : {DetectorKind::chi_abs, DetectorKind::chi_ci, DetectorKind::nist_vote, DetectorKind::hedge})
        if (to_string(k) == name) return k;
    if (name == "nist") return DetectorKind::nist_vote;
    throw ArgumentError("unknown detector '" + std::string(name) +
                        "' (expected entropy, chi_abs, chi_ci, nist_vote or hedge)");
}

bool detector_says_random(DetectorKind kind, std::span<const std::uint8_t> fragment, const DetectorContext& ctx) {
    switch (kind) {
        case DetectorKind::entropy_threshold:
            return randomness::entropy_mle(fragment) > ctx.entropy_threshold;
        case DetectorKind::chi_abs:
            return randomness::chi_abs_test(fragment, ctx.calibration).passed;
        case DetectorKind::chi_ci:
            return randomness::chi_ci_test(fragment).passed;
        case DetectorKind::nist_vote:
            return randomness::nist_majority_vote(fragment, ctx.suite).verdict == randomness::Verdict::random;
        case DetectorKind::hedge:
            return randomness::hedge(fragment, ctx.hedge).passed;
    }
    return false;
}

Metrics evaluate_detector(DetectorKind kind, const std::vector<LabeledFragment>& fragments, const DetectorContext& ctx,
                          const std::vector<std::string>& labels, unsigned jobs) {
    if (labels.size() != 2) throw ArgumentError("detector evaluation needs exactly two labels");
    if (fragments.empty()) throw DataError("no fragments to evaluate");
    std::vector<std::size_t> truth(fragments.size());
    std::vector<std::size_t> predicted(fragments.size());
    util::parallel_for(fragments.size(), jobs, [&](std::size_t i) {
        truth[i] = fragments[i].encrypted ? 0 : 1;
        predicted[i] = detector_says_random(kind, fragments[i].bytes, ctx) ? 0 : 1;
    });
    return compute_metrics(labels, truth, predicted);
}

double fit_entropy_threshold(const std::vector<LabeledFragment>& dev) {
    if (dev.empty()) throw DataError("cannot fit an entropy threshold without dev fragments");
    std::vector<std::pair<double, bool>> points;
    points.reserve(dev.size());
    for (const auto& f : dev) points.emplace_back(randomness::entropy_mle(f.bytes), f.encrypted);
    std::sort(points.begin(), points.end());

    // Threshold below everything: every fragment is called encrypted.
    std::size_t correct = 0;
    for (const auto& p : points) correct += p.second;
    std::size_t best_correct = correct;
    double best = points.front().first - 1e-9;
    for (std::size_t i = 0; i < points.size(); ++i) {
        // Moving the threshold past point i flips it to "compressed".
        correct += points[i].second ? -1 : 1;
        if (i + 1 < points.size() && points[i + 1].first == points[i].first) continue;
        if (correct > best_correct) {
            best_correct = correct;
            best = i + 1 < points.size() ? 0.5 * (points[i].first + points[i + 1].first) : points[i].first;
        }
    }
    return best;
}

}  // namespace encod::eval
