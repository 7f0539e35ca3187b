#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "encod/error.hpp"

namespace encod::nn {

/// Row-major dense matrix; rows are samples.
template <typename T>
using Tensor = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

enum class Activation { relu, selu, sigmoid, softmax, identity };
enum class Initializer { glorot_uniform, lecun_normal, uniform };
enum class Loss { cross_entropy, mse };

inline constexpr double kSeluLambda = 1.0507009873554804934193349852946;
inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

/// Half-width of the plain uniform initializer (Keras RandomUniform default).
inline constexpr double kUniformInitLimit = 0.05;

inline std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::selu: return "selu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
        case Activation::identity: return "identity";
    }
    return "?";
}

inline Activation activation_from_string(std::string_view s) {
    for (auto a : {Activation::relu, Activation::selu, Activation::sigmoid, Activation::softmax,
                   Activation::identity})
        if (to_string(a) == s) return a;
    throw ArgumentError("unknown activation: " + std::string(s));
}

inline std::string_view to_string(Initializer i) {
    switch (i) {
        case Initializer::glorot_uniform: return "glorot_uniform";
        case Initializer::lecun_normal: return "lecun_normal";
        case Initializer::uniform: return "uniform";
    }
    return "?";
}

inline Initializer initializer_from_string(std::string_view s) {
    for (auto i : {Initializer::glorot_uniform, Initializer::lecun_normal, Initializer::uniform})
        if (to_string(i) == s) return i;
    throw ArgumentError("unknown initializer: " + std::string(s));
}

inline std::string_view to_string(Loss l) {
    return l == Loss::cross_entropy ? "cross_entropy" : "mse";
}

inline Loss loss_from_string(std::string_view s) {
    if (s == "cross_entropy") return Loss::cross_entropy;
    if (s == "mse") return Loss::mse;
    throw ArgumentError("unknown loss: " + std::string(s));
}

}  // namespace encod::nn
