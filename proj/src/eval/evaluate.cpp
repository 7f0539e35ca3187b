#include "encod/eval/evaluate.hpp"

#include "encod/error.hpp"
#include "encod/models/inference.hpp"
#include "encod/util/parallel.hpp"

namespace encod::eval {
namespace {

/// Runs fn(classifier, bytes, i) for every entry, one reader and classifier per worker.
template <typename Fn>
void for_each_fragment(const models::ModelBundle& bundle, const corpus::Manifest& manifest,
                       const std::vector<corpus::ManifestEntry>& entries, unsigned jobs, Fn&& fn) {
    const std::size_t chunks = std::max(1u, jobs);
    util::parallel_for(chunks, jobs, [&](std::size_t chunk) {
        corpus::FragmentReader reader(manifest.base_dir);
        models::Classifier classifier(bundle);
        util::Bytes buf;
        const std::size_t begin = entries.size() * chunk / chunks;
        const std::size_t end = entries.size() * (chunk + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            reader.read_into(entries[i], buf);
            fn(classifier, buf, i);
        }
    });
}

}  // namespace

Metrics evaluate_model(const models::ModelBundle& bundle, const corpus::Manifest& manifest,
                       const std::vector<corpus::ManifestEntry>& entries, unsigned jobs) {
    std::vector<corpus::ManifestEntry> covered;
    std::vector<std::size_t> truth;
    std::size_t wrong_size = 0;
    for (const auto& e : entries) {
        const auto idx = bundle.class_index(e.label);
        if (!idx) continue;
        if (e.size != bundle.size_class) {
            ++wrong_size;
            continue;
        }
        covered.push_back(e);
        truth.push_back(*idx);
    }
    if (covered.empty())
        throw DataError(wrong_size > 0 ? "test fragments do not match the model's size class " +
                                             std::to_string(bundle.size_class)
                                       : std::string("no test fragments with labels the model covers"));
    std::vector<std::size_t> predicted(covered.size());
    for_each_fragment(bundle, manifest, covered, jobs, [&](models::Classifier& c, const util::Bytes& b, std::size_t i) {
        predicted[i] = c.classify_index(b);
    });
    return compute_metrics(bundle.label_map(), truth, predicted);
}

Metrics evaluate_model(const models::ModelBundle& bundle, const corpus::Manifest& test, unsigned jobs) {
    return evaluate_model(bundle, test, test.entries, jobs);
}

Metrics evaluate_binarized(const models::ModelBundle& bundle, const corpus::Manifest& manifest,
                           const std::vector<corpus::ManifestEntry>& entries, unsigned jobs) {
    std::vector<corpus::ManifestEntry> covered;
    for (const auto& e : entries)
        if (e.size == bundle.size_class) covered.push_back(e);
    if (covered.empty()) throw DataError("no test fragments at the model's size class");
    const auto label_map = bundle.label_map();
    std::vector<std::size_t> truth(covered.size());
    std::vector<std::size_t> predicted(covered.size());
    for_each_fragment(bundle, manifest, covered, jobs, [&](models::Classifier& c, const util::Bytes& b, std::size_t i) {
        const auto p = c.classify(b);
        truth[i] = covered[i].label == corpus::CodecLabel::enc ? 0 : 1;
        predicted[i] = models::binarize_multiclass(p.probabilities, label_map) == models::BinaryDecision::encrypted ? 0 : 1;
    });
    return compute_metrics(kBinaryLabels, truth, predicted);
}

}  // namespace encod::eval
