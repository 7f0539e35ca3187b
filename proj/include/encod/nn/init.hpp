#pragma once

#include <cmath>
#include <random>

#include "encod/nn/tensor.hpp"

namespace encod::nn {

/// Entries i.i.d. uniform on +-sqrt(6 / (fan_in + fan_out)).
template <typename T, typename Rng>
Tensor<T> init_glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    if (fan_in == 0 || fan_out == 0) throw ArgumentError("glorot_uniform: fans must be >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Tensor<T> w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<T>(dist(rng));
    return w;
}

/// Entries i.i.d. normal(0, 1 / fan_in).
template <typename T, typename Rng>
Tensor<T> init_lecun_normal(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    if (fan_in == 0 || fan_out == 0) throw ArgumentError("lecun_normal: fans must be >= 1");
    std::normal_distribution<double> dist(0.0, std::sqrt(1.0 / static_cast<double>(fan_in)));
    Tensor<T> w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<T>(dist(rng));
    return w;
}

template <typename T, typename Rng>
Tensor<T> init_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng,
                       double limit = kUniformInitLimit) {
    if (fan_in == 0 || fan_out == 0) throw ArgumentError("uniform: fans must be >= 1");
    std::uniform_real_distribution<double> dist(-limit, limit);
    Tensor<T> w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<T>(dist(rng));
    return w;
}

template <typename T, typename Rng>
Tensor<T> init_weights(Initializer kind, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    switch (kind) {
        case Initializer::glorot_uniform: return init_glorot_uniform<T>(fan_in, fan_out, rng);
        case Initializer::lecun_normal: return init_lecun_normal<T>(fan_in, fan_out, rng);
        case Initializer::uniform: return init_uniform<T>(fan_in, fan_out, rng);
    }
    throw ArgumentError("unknown initializer");
}

}  // namespace encod::nn
