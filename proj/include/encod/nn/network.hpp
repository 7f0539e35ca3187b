#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "encod/nn/init.hpp"
#include "encod/nn/tensor.hpp"

namespace encod::nn {

/// Architecture and training recipe of one fully-connected network.
struct NetworkSpec {
    std::vector<std::size_t> dims;  ///< input width followed by each layer's width
    std::vector<Activation> activations;  ///< one per layer
    Initializer initializer = Initializer::glorot_uniform;
    Loss loss = Loss::cross_entropy;
    std::size_t batch_size = 64;
    std::size_t epochs = 100;
    std::size_t patience = 5;
    double learning_rate = 1e-3;
    std::uint64_t rng_seed = 1;

    std::size_t layer_count() const { return activations.size(); }
    std::size_t input_width() const { return dims.empty() ? 0 : dims.front(); }
    std::size_t output_width() const { return dims.empty() ? 0 : dims.back(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i + 1 < dims.size(); ++i) n += dims[i] * dims[i + 1] + dims[i + 1];
        return n;
    }

    /// Throws ArgumentError when dims and activations do not chain or softmax
    /// is used before the last layer.
    void validate() const {
        if (dims.size() < 2) throw ArgumentError("network needs at least one layer");
        if (activations.size() + 1 != dims.size())
            throw ArgumentError("network: " + std::to_string(dims.size()) + " dims for " +
                                std::to_string(activations.size()) + " activations");
        for (std::size_t d : dims)
            if (d == 0) throw ArgumentError("network: zero-width layer");
        for (std::size_t i = 0; i + 1 < activations.size(); ++i)
            if (activations[i] == Activation::softmax)
                throw ArgumentError("network: softmax is only allowed on the final layer");
    }

    bool operator==(const NetworkSpec&) const = default;
};

template <typename T>
struct DenseLayer {
    Tensor<T> weights;  ///< fan_in x fan_out
    RowVector<T> bias;  ///< fan_out
    Activation activation = Activation::identity;

    std::size_t fan_in() const { return static_cast<std::size_t>(weights.rows()); }
    std::size_t fan_out() const { return static_cast<std::size_t>(weights.cols()); }
};

template <typename T>
struct Gradients {
    std::vector<Tensor<T>> weights;
    std::vector<RowVector<T>> bias;
};

template <typename M>
void apply_activation(Activation act, M& z) {
    using T = typename M::Scalar;
    switch (act) {
        case Activation::relu:
            z = z.cwiseMax(T(0));
            break;
        case Activation::selu: {
            const T lambda = static_cast<T>(kSeluLambda);
            const T la = static_cast<T>(kSeluLambda * kSeluAlpha);
            z = z.unaryExpr([lambda, la](T v) { return v > T(0) ? lambda * v : la * (std::exp(v) - T(1)); });
            break;
        }
        case Activation::sigmoid:
            z = z.unaryExpr([](T v) { return T(1) / (T(1) + std::exp(-v)); });
            break;
        case Activation::softmax:
            for (Eigen::Index r = 0; r < z.rows(); ++r) {
                auto row = z.row(r);
                const T m = row.maxCoeff();
                row = (row.array() - m).exp().matrix();
                row /= row.sum();
            }
            break;
        case Activation::identity:
            break;
    }
}

/// Multiplies the upstream gradient by the activation derivative, expressed in
/// terms of the activation output `a`.
template <typename T>
Tensor<T> activation_backward(Activation act, const Tensor<T>& a, const Tensor<T>& upstream) {
    switch (act) {
        case Activation::relu:
            return (a.array() > T(0)).select(upstream, T(0));
        case Activation::selu: {
            const T lambda = static_cast<T>(kSeluLambda);
            const T la = static_cast<T>(kSeluLambda * kSeluAlpha);
            Tensor<T> d = a.unaryExpr([lambda, la](T v) { return v > T(0) ? lambda : v + la; });
            return d.cwiseProduct(upstream);
        }
        case Activation::sigmoid:
            return a.cwiseProduct((T(1) - a.array()).matrix()).cwiseProduct(upstream);
        case Activation::softmax: {
            // Row-wise Jacobian-vector product: s * (g - <g, s>).
            Tensor<T> out(a.rows(), a.cols());
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                const T dot = a.row(r).dot(upstream.row(r));
                out.row(r) = a.row(r).cwiseProduct((upstream.row(r).array() - dot).matrix());
            }
            return out;
        }
        case Activation::identity:
            return upstream;
    }
    return upstream;
}

/// Loss averaged over the batch (and over outputs for mse), accumulated in double.
template <typename T>
double compute_loss(Loss loss, const Tensor<T>& output, const Tensor<T>& targets) {
    if (output.rows() != targets.rows() || output.cols() != targets.cols())
        throw ArgumentError("loss: output/target shape mismatch");
    const double batch = static_cast<double>(output.rows());
    double total = 0.0;
    if (loss == Loss::cross_entropy) {
        for (Eigen::Index i = 0; i < output.size(); ++i) {
            const double y = static_cast<double>(targets.data()[i]);
            if (y != 0.0) {
                const double p = std::max(static_cast<double>(output.data()[i]), 1e-12);
                total -= y * std::log(p);
            }
        }
        return total / batch;
    }
    for (Eigen::Index i = 0; i < output.size(); ++i) {
        const double d = static_cast<double>(output.data()[i]) - static_cast<double>(targets.data()[i]);
        total += d * d;
    }
    return total / (batch * static_cast<double>(output.cols()));
}

/// Reusable buffers for single-sample inference.
template <typename T>
struct InferenceWorkspace {
    std::vector<RowVector<T>> buffers;
};

template <typename T>
class Network {
public:
    Network() = default;
    explicit Network(std::vector<DenseLayer<T>> layers) : layers_(std::move(layers)) { check_chain(); }

    /// Fresh network with weights drawn from spec.initializer seeded by
    /// spec.rng_seed; biases start at zero.
    static Network build(const NetworkSpec& spec) {
        spec.validate();
        std::mt19937_64 rng(spec.rng_seed);
        std::vector<DenseLayer<T>> layers;
        for (std::size_t i = 0; i < spec.layer_count(); ++i) {
            DenseLayer<T> layer;
            layer.weights = init_weights<T>(spec.initializer, spec.dims[i], spec.dims[i + 1], rng);
            layer.bias = RowVector<T>::Zero(static_cast<Eigen::Index>(spec.dims[i + 1]));
            layer.activation = spec.activations[i];
            layers.push_back(std::move(layer));
        }
        return Network(std::move(layers));
    }

    const std::vector<DenseLayer<T>>& layers() const { return layers_; }
    std::vector<DenseLayer<T>>& layers() { return layers_; }

    std::size_t input_width() const { return layers_.empty() ? 0 : layers_.front().fan_in(); }
    std::size_t output_width() const { return layers_.empty() ? 0 : layers_.back().fan_out(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
        return n;
    }

    /// Returns [input, a_1, ..., a_L].
    std::vector<Tensor<T>> forward(const Tensor<T>& batch) const {
        if (static_cast<std::size_t>(batch.cols()) != input_width())
            throw ArgumentError("forward: batch has " + std::to_string(batch.cols()) +
                                " columns, network expects " + std::to_string(input_width()));
        std::vector<Tensor<T>> acts;
        acts.reserve(layers_.size() + 1);
        acts.push_back(batch);
        for (const auto& layer : layers_) {
            Tensor<T> z = acts.back() * layer.weights;
            z.rowwise() += layer.bias;
            apply_activation(layer.activation, z);
            acts.push_back(std::move(z));
        }
        return acts;
    }

    Tensor<T> predict(const Tensor<T>& batch) const { return std::move(forward(batch).back()); }

    /// Single-sample forward pass without per-call allocations once the
    /// workspace is warm. Returns a view into the workspace.
    std::span<const T> predict_one(std::span<const T> input, InferenceWorkspace<T>& ws) const {
        if (input.size() != input_width()) throw ArgumentError("predict_one: input width mismatch");
        ws.buffers.resize(layers_.size());
        Eigen::Map<const RowVector<T>> x(input.data(), static_cast<Eigen::Index>(input.size()));
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            const auto& layer = layers_[i];
            auto& out = ws.buffers[i];
            if (i == 0)
                out.noalias() = x * layer.weights;
            else
                out.noalias() = ws.buffers[i - 1] * layer.weights;
            out += layer.bias;
            activate_row(layer.activation, out);
        }
        const auto& last = ws.buffers.back();
        return {last.data(), static_cast<std::size_t>(last.size())};
    }

    /// Gradients of the mean batch loss. Cross-entropy after softmax uses the
    /// fused (p - y) / batch output gradient.
    Gradients<T> backward(const std::vector<Tensor<T>>& acts, const Tensor<T>& targets, Loss loss) const {
        if (acts.size() != layers_.size() + 1) throw ArgumentError("backward: activation count mismatch");
        const Tensor<T>& out = acts.back();
        if (out.rows() != targets.rows() || out.cols() != targets.cols())
            throw ArgumentError("backward: target shape mismatch");
        const T batch = static_cast<T>(out.rows());

        Gradients<T> g;
        g.weights.resize(layers_.size());
        g.bias.resize(layers_.size());

        Tensor<T> delta;  // gradient w.r.t. the pre-activation of the current layer
        const Activation last_act = layers_.back().activation;
        if (loss == Loss::cross_entropy && last_act == Activation::softmax) {
            delta = (out - targets) / batch;
        } else {
            Tensor<T> d_out;
            if (loss == Loss::cross_entropy) {
                d_out = -targets.cwiseQuotient(out.cwiseMax(T(1e-12))) / batch;
            } else {
                d_out = (out - targets) * (T(2) / (batch * static_cast<T>(out.cols())));
            }
            delta = activation_backward(last_act, out, d_out);
        }

        for (std::size_t li = layers_.size(); li-- > 0;) {
            const Tensor<T>& input = acts[li];
            g.weights[li].noalias() = input.transpose() * delta;
            g.bias[li] = delta.colwise().sum();
            if (li > 0) {
                Tensor<T> upstream = delta * layers_[li].weights.transpose();
                delta = activation_backward(layers_[li - 1].activation, acts[li], upstream);
            }
        }
        return g;
    }

    double loss(const Tensor<T>& batch, const Tensor<T>& targets, Loss kind) const {
        return compute_loss(kind, predict(batch), targets);
    }

    bool all_finite() const {
        for (const auto& l : layers_)
            if (!l.weights.allFinite() || !l.bias.allFinite()) return false;
        return true;
    }

    template <typename U>
    Network<U> cast() const {
        std::vector<DenseLayer<U>> out;
        for (const auto& l : layers_)
            out.push_back(DenseLayer<U>{l.weights.template cast<U>(), l.bias.template cast<U>(), l.activation});
        return Network<U>(std::move(out));
    }

private:
    void check_chain() const {
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            const auto& l = layers_[i];
            if (l.bias.size() != l.weights.cols()) throw ArgumentError("layer bias width mismatch");
            if (i > 0 && layers_[i - 1].fan_out() != l.fan_in()) throw ArgumentError("layer dims do not chain");
            if (i + 1 < layers_.size() && l.activation == Activation::softmax)
                throw ArgumentError("softmax is only allowed on the final layer");
        }
    }

    static void activate_row(Activation act, RowVector<T>& v) { apply_activation(act, v); }

    std::vector<DenseLayer<T>> layers_;
};

}  // namespace encod::nn
