#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "encod/nn/network.hpp"

namespace encod::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias-corrected moments; the timestep is incremented before the
/// correction terms are computed.
template <typename T>
class Adam {
public:
    explicit Adam(AdamConfig config = {}) : config_(config) {}

    const AdamConfig& config() const { return config_; }
    std::uint64_t timestep() const { return t_; }

    void step(Network<T>& net, const Gradients<T>& grads) {
        auto& layers = net.layers();
        if (grads.weights.size() != layers.size() || grads.bias.size() != layers.size())
            throw ArgumentError("adam: gradient count mismatch");
        if (m_w_.empty()) init_moments(net);
        ++t_;
        const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < layers.size(); ++i) {
            update(layers[i].weights, grads.weights[i], m_w_[i], v_w_[i], c1, c2);
            update(layers[i].bias, grads.bias[i], m_b_[i], v_b_[i], c1, c2);
        }
    }

private:
    void init_moments(const Network<T>& net) {
        for (const auto& l : net.layers()) {
            m_w_.push_back(Tensor<T>::Zero(l.weights.rows(), l.weights.cols()));
            v_w_.push_back(Tensor<T>::Zero(l.weights.rows(), l.weights.cols()));
            m_b_.push_back(RowVector<T>::Zero(l.bias.size()));
            v_b_.push_back(RowVector<T>::Zero(l.bias.size()));
        }
    }

    template <typename P, typename G>
    void update(P& param, const G& grad, P& m, P& v, double c1, double c2) const {
        if (param.rows() != grad.rows() || param.cols() != grad.cols())
            throw ArgumentError("adam: gradient shape mismatch");
        const T b1 = static_cast<T>(config_.beta1);
        const T b2 = static_cast<T>(config_.beta2);
        const T step = static_cast<T>(config_.learning_rate / c1);
        const T inv_c2 = static_cast<T>(1.0 / c2);
        const T eps = static_cast<T>(config_.epsilon);
        m = b1 * m + (T(1) - b1) * grad;
        v = b2 * v + (T(1) - b2) * grad.cwiseProduct(grad);
        param.array() -= step * m.array() / ((v.array() * inv_c2).sqrt() + eps);
    }

    AdamConfig config_;
    std::uint64_t t_ = 0;
    std::vector<Tensor<T>> m_w_, v_w_;
    std::vector<RowVector<T>> m_b_, v_b_;
};

}  // namespace encod::nn
