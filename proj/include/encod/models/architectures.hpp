#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "encod/nn/network.hpp"

namespace encod::models {

/// 256-200-128-64-2, ReLU x3 + softmax, Glorot uniform, batch 64.
nn::NetworkSpec build_binary(std::size_t size_class = 2048, std::uint64_t seed = 1);

/// 256-256-200-128-64-k, SeLU x4 + softmax, LeCun normal, batch 64.
/// Throws ArgumentError for fewer than two labels.
nn::NetworkSpec build_multiclass(std::size_t label_count, std::uint64_t seed = 1);

enum class AutoencoderVariant { ae1, ae2 };

std::string_view to_string(AutoencoderVariant v);
AutoencoderVariant autoencoder_variant_from_string(std::string_view name);

struct AutoencoderSpec {
    AutoencoderVariant variant = AutoencoderVariant::ae1;
    /// Full encoder + mirrored decoder, ReLU inside, sigmoid output, MSE,
    /// uniform init, batch 128, 25 epochs.
    nn::NetworkSpec autoencoder;
    /// Number of leading layers that form the encoder.
    std::size_t encoder_layers = 0;
    /// Classifier on the latent vector: ReLU hidden layer + softmax, Glorot, batch 64.
    nn::NetworkSpec head;

    std::size_t latent_width() const { return autoencoder.dims[encoder_layers]; }
};

/// AE1: encoder 256-200-128, head 128-64-2. AE2: encoder 256-156-128-64, head 64-64-2.
AutoencoderSpec build_autoencoder(AutoencoderVariant variant, std::uint64_t seed = 1);

/// Leading `layers` layers of a network (the encoder of an autoencoder).
template <typename T>
nn::Network<T> slice_layers(const nn::Network<T>& net, std::size_t layers) {
    if (layers == 0 || layers > net.layers().size()) throw ArgumentError("slice_layers: bad layer count");
    std::vector<nn::DenseLayer<T>> out(net.layers().begin(),
                                       net.layers().begin() + static_cast<std::ptrdiff_t>(layers));
    return nn::Network<T>(std::move(out));
}

}  // namespace encod::models
