#include "encod/models/inference.hpp"

#include <algorithm>

#include "encod/error.hpp"
#include "encod/features/scaler.hpp"

namespace encod::models {

Classifier::Classifier(const ModelBundle& bundle)
    : bundle_(&bundle), input_(features::kFeatureWidth), workspaces_(bundle.networks.size()) {
    bundle.validate();
}

std::span<const float> Classifier::run(std::span<const std::uint8_t> fragment) {
    if (fragment.size() != bundle_->size_class)
        throw ArgumentError("fragment has " + std::to_string(fragment.size()) + " bytes; model expects " +
                            std::to_string(bundle_->size_class));
    features::apply_scaler(features::byte_histogram(fragment), bundle_->scaler, input_);
    std::span<const float> x = input_;
    for (std::size_t i = 0; i < bundle_->networks.size(); ++i)
        x = bundle_->networks[i].net.predict_one(x, workspaces_[i]);
    return x;
}

Prediction Classifier::classify(std::span<const std::uint8_t> fragment) {
    const auto probs = run(fragment);
    Prediction p;
    p.probabilities.assign(probs.begin(), probs.end());
    p.index = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    p.label = bundle_->classes[p.index].name;
    return p;
}

std::size_t Classifier::classify_index(std::span<const std::uint8_t> fragment) {
    const auto probs = run(fragment);
    return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

Prediction classify(const ModelBundle& bundle, std::span<const std::uint8_t> fragment) {
    return Classifier(bundle).classify(fragment);
}

nn::Tensor<float> scaled_batch(const ModelBundle& bundle, std::span<const features::FeatureVector> vectors) {
    nn::Tensor<float> x(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(features::kFeatureWidth));
    for (std::size_t i = 0; i < vectors.size(); ++i)
        features::apply_scaler(vectors[i], bundle.scaler,
                               std::span<float>(x.row(static_cast<Eigen::Index>(i)).data(), features::kFeatureWidth));
    return x;
}

nn::Tensor<float> predict_proba(const ModelBundle& bundle, std::span<const features::FeatureVector> vectors) {
    bundle.validate();
    nn::Tensor<float> x = scaled_batch(bundle, vectors);
    for (const auto& n : bundle.networks) x = n.net.predict(x);
    return x;
}

std::string_view to_string(BinaryDecision d) { return d == BinaryDecision::encrypted ? "encrypted" : "compressed"; }

BinaryDecision binarize_multiclass(std::span<const float> probabilities, const std::vector<std::string>& label_map) {
    if (probabilities.size() != label_map.size())
        throw ArgumentError("binarize: probability vector and label map differ in length");
    const auto enc = std::find(label_map.begin(), label_map.end(), "enc");
    if (enc == label_map.end()) throw ArgumentError("binarize: label map has no 'enc' class");
    const auto arg = std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin();
    return arg == enc - label_map.begin() ? BinaryDecision::encrypted : BinaryDecision::compressed;
}

}  // namespace encod::models
