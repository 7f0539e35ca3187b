#include "encod/models/architectures.hpp"

#include "encod/corpus/fragment.hpp"
#include "encod/features/histogram.hpp"

namespace encod::models {

using nn::Activation;
using nn::Initializer;
using nn::Loss;

nn::NetworkSpec build_binary(std::size_t size_class, std::uint64_t seed) {
    corpus::require_size_class(size_class);
    nn::NetworkSpec spec;
    spec.dims = {features::kFeatureWidth, 200, 128, 64, 2};
    spec.activations = {Activation::relu, Activation::relu, Activation::relu, Activation::softmax};
    spec.initializer = Initializer::glorot_uniform;
    spec.loss = Loss::cross_entropy;
    spec.batch_size = 64;
    spec.rng_seed = seed;
    return spec;
}

nn::NetworkSpec build_multiclass(std::size_t label_count, std::uint64_t seed) {
    if (label_count < 2) throw ArgumentError("multi-class model needs at least two labels");
    nn::NetworkSpec spec;
    spec.dims = {features::kFeatureWidth, 256, 200, 128, 64, label_count};
    spec.activations = {Activation::selu, Activation::selu, Activation::selu, Activation::selu, Activation::softmax};
    spec.initializer = Initializer::lecun_normal;
    spec.loss = Loss::cross_entropy;
    spec.batch_size = 64;
    spec.rng_seed = seed;
    return spec;
}

std::string_view to_string(AutoencoderVariant v) { return v == AutoencoderVariant::ae1 ? "ae1" : "ae2"; }

AutoencoderVariant autoencoder_variant_from_string(std::string_view name) {
    if (name == "ae1" || name == "AE1") return AutoencoderVariant::ae1;
    if (name == "ae2" || name == "AE2") return AutoencoderVariant::ae2;
    throw ArgumentError("unknown autoencoder variant '" + std::string(name) + "' (expected ae1 or ae2)");
}

AutoencoderSpec build_autoencoder(AutoencoderVariant variant, std::uint64_t seed) {
    const std::vector<std::size_t> encoder = variant == AutoencoderVariant::ae1
                                                 ? std::vector<std::size_t>{features::kFeatureWidth, 200, 128}
                                                 : std::vector<std::size_t>{features::kFeatureWidth, 156, 128, 64};
    AutoencoderSpec out;
    out.variant = variant;
    out.encoder_layers = encoder.size() - 1;

    auto& ae = out.autoencoder;
    ae.dims = encoder;
    for (std::size_t i = encoder.size() - 1; i-- > 0;) ae.dims.push_back(encoder[i]);
    ae.activations.assign(ae.dims.size() - 2, Activation::relu);
    ae.activations.push_back(Activation::sigmoid);
    ae.initializer = Initializer::uniform;
    ae.loss = Loss::mse;
    ae.batch_size = 128;
    ae.epochs = 25;
    ae.patience = 0;
    ae.rng_seed = seed;

    auto& head = out.head;
    head.dims = {encoder.back(), 64, 2};
    head.activations = {Activation::relu, Activation::softmax};
    head.initializer = Initializer::glorot_uniform;
    head.loss = Loss::cross_entropy;
    head.batch_size = 64;
    head.rng_seed = seed + 1;
    return out;
}

}  // namespace encod::models
