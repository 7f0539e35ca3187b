#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "encod/features/histogram.hpp"
#include "encod/models/bundle.hpp"
#include "encod/nn/tensor.hpp"

namespace encod::models {

struct Prediction {
    std::size_t index = 0;
    std::string label;
    std::vector<float> probabilities;
};

/// Single-fragment classifier holding reusable buffers. Not thread-safe; make
/// one per thread (the bundle itself is shared read-only).
class Classifier {
public:
    explicit Classifier(const ModelBundle& bundle);

    /// Throws ArgumentError if the fragment length differs from the bundle's size class.
    Prediction classify(std::span<const std::uint8_t> fragment);
    /// Index of the most probable class, skipping label/probability copies.
    std::size_t classify_index(std::span<const std::uint8_t> fragment);

private:
    std::span<const float> run(std::span<const std::uint8_t> fragment);

    const ModelBundle* bundle_;
    std::vector<float> input_;
    std::vector<nn::InferenceWorkspace<float>> workspaces_;
};

Prediction classify(const ModelBundle& bundle, std::span<const std::uint8_t> fragment);

/// Scales feature vectors with the bundle's scaler into a network input batch.
nn::Tensor<float> scaled_batch(const ModelBundle& bundle, std::span<const features::FeatureVector> vectors);
/// Class probabilities for a batch of raw feature vectors.
nn::Tensor<float> predict_proba(const ModelBundle& bundle, std::span<const features::FeatureVector> vectors);

enum class BinaryDecision { encrypted, compressed };
std::string_view to_string(BinaryDecision d);

/// Argmax collapse: encrypted iff the most probable label is "enc".
/// Throws ArgumentError when the label map has no "enc".
BinaryDecision binarize_multiclass(std::span<const float> probabilities,
                                   const std::vector<std::string>& label_map);

}  // namespace encod::models
