#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "encod/corpus/manifest.hpp"
#include "encod/eval/metrics.hpp"
#include "encod/eval/split.hpp"
#include "encod/features/histogram.hpp"
#include "encod/models/architectures.hpp"
#include "encod/models/bundle.hpp"
#include "encod/nn/trainer.hpp"

namespace encod::models {

struct TrainOptions {
    /// Per-class cap; classes are balanced by downsampling to the smallest.
    std::size_t quota = 20000;
    std::uint64_t seed = 7;
    std::size_t max_epochs = 100;
    std::size_t patience = 5;
    double learning_rate = 1e-3;
    /// 0 keeps the architecture's batch size.
    std::size_t batch_size = 0;
    eval::SplitSpec split{};  ///< seed is overridden by `seed`
    /// Order the target class before enc in the label map.
    bool swap_labels = false;
    unsigned jobs = 1;
    nn::EpochCallback on_epoch;
};

struct TrainingResult {
    ModelBundle bundle;
    nn::LossHistory history;
    eval::Metrics test_metrics;
    eval::DatasetSplit split;
};

/// Fragments per class, drawn evenly across each class's member labels.
/// Throws DataError naming a class with no fragments at this size.
std::vector<std::vector<corpus::ManifestEntry>> select_balanced(const corpus::Manifest& manifest,
                                                                const std::vector<ClassDef>& classes,
                                                                std::size_t size_class, std::size_t quota,
                                                                std::uint64_t seed);

/// Reads fragments and computes their histograms.
std::vector<features::FeatureVector> load_features(const corpus::Manifest& manifest,
                                                   const std::vector<corpus::ManifestEntry>& entries,
                                                   unsigned jobs = 1);

/// enc vs `target` (a base label or macro). Throws DataError on missing data.
TrainingResult train_binary(const corpus::Manifest& manifest, const std::string& target,
                            std::size_t size_class, const TrainOptions& options);

/// Default class set: enc, cmp, png, jpeg, mp3, pdf, office, video.
std::vector<std::string> default_multiclass_labels();
/// All 16 base labels (fingerprinting mode).
std::vector<std::string> full_multiclass_labels();

/// Classes whose members are all missing at this size are an error; members
/// missing from a macro (e.g. rar) are skipped.
TrainingResult train_multiclass(const corpus::Manifest& manifest, const std::vector<std::string>& labels,
                                std::size_t size_class, const TrainOptions& options);

struct AutoencoderModel {
    AutoencoderSpec spec;
    nn::Network<float> network;  ///< encoder + decoder
    features::ScalerParams scaler;
    std::size_t size_class = 0;
    nn::LossHistory history;
    double untrained_dev_loss = 0.0;
    double trained_dev_loss = 0.0;

    nn::Network<float> encoder() const { return slice_layers(network, spec.encoder_layers); }
};

struct AutoencoderOptions {
    /// Fragments per base label used to fit the autoencoder.
    std::size_t quota_per_label = 2000;
    std::uint64_t seed = 7;
    std::size_t epochs = 25;
    double learning_rate = 1e-3;
    unsigned jobs = 1;
    nn::EpochCallback on_epoch;
};

/// One autoencoder per size, fitted on every label present at that size.
AutoencoderModel train_autoencoder(const corpus::Manifest& manifest, AutoencoderVariant variant,
                                   std::size_t size_class, const AutoencoderOptions& options);

/// Binary head on the frozen encoder's latent vectors. The selection and split
/// match train_binary with the same options.
TrainingResult train_ae_classifier(const corpus::Manifest& manifest, const AutoencoderModel& autoencoder,
                                   const std::string& target, std::size_t size_class,
                                   const TrainOptions& options);

/// Digest identifying the fragments a model was trained on.
std::string corpus_digest(const std::vector<corpus::ManifestEntry>& entries);

}  // namespace encod::models
