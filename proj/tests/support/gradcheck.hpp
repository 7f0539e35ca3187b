#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "encod/nn/network.hpp"

namespace encod::testkit {

inline nn::Tensor<double> random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed, double lo = -1,
                                        double hi = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    nn::Tensor<double> m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
    return m;
}

inline nn::Tensor<double> one_hot(Eigen::Index rows, Eigen::Index classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    nn::Tensor<double> y = nn::Tensor<double>::Zero(rows, classes);
    for (Eigen::Index i = 0; i < rows; ++i) y(i, static_cast<Eigen::Index>(rng() % classes)) = 1.0;
    return y;
}

// Largest relative error between backprop and central differences over a
// sample of parameters (every parameter when max_checks is large enough).
inline double gradient_check(nn::Network<double> net, const nn::Tensor<double>& x, const nn::Tensor<double>& y,
                             nn::Loss loss, std::size_t max_checks, std::uint64_t seed) {
    const auto grads = net.backward(net.forward(x), y, loss);
    const double h = 1e-5;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = net.loss(x, y, loss);
        param = saved - h;
        const double down = net.loss(x, y, loss);
        param = saved;
        const double numeric = (up - down) / (2 * h);
        const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
        worst = std::max(worst, std::fabs(analytic - numeric) / denom);
    };
    auto& layers = net.layers();
    for (std::size_t li = 0; li < layers.size(); ++li) {
        auto& w = layers[li].weights;
        const std::size_t n = static_cast<std::size_t>(w.size());
        for (std::size_t k = 0; k < std::min(n, max_checks); ++k) {
            const std::size_t idx = n <= max_checks ? k : rng() % n;
            check(w.data()[idx], grads.weights[li].data()[idx]);
        }
        auto& b = layers[li].bias;
        for (Eigen::Index k = 0; k < b.size(); ++k)
            if (static_cast<std::size_t>(k) < max_checks) check(b(k), grads.bias[li](k));
    }
    return worst;
}

}  // namespace encod::testkit
