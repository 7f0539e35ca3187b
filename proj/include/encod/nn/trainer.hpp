#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "encod/nn/adam.hpp"
#include "encod/nn/network.hpp"

namespace encod::nn {

struct TrainConfig {
    std::size_t batch_size = 64;
    std::size_t max_epochs = 100;
    /// Early stopping on dev loss; 0 disables it.
    std::size_t patience = 5;
    double learning_rate = 1e-3;
    std::uint64_t seed = 1;
    Loss loss = Loss::cross_entropy;
};

struct LossHistory {
    std::vector<double> train;
    std::vector<double> dev;  ///< empty without a dev split
    std::size_t best_epoch = 0;

    bool operator==(const LossHistory&) const = default;
};

/// Called after every epoch with (epoch, train_loss, dev_loss or NaN).
using EpochCallback = std::function<void(std::size_t, double, double)>;

template <typename T>
double evaluate_loss(const Network<T>& net, const Tensor<T>& x, const Tensor<T>& y, Loss loss,
                     Eigen::Index chunk = 4096) {
    double total = 0.0;
    for (Eigen::Index start = 0; start < x.rows(); start += chunk) {
        const Eigen::Index n = std::min(chunk, x.rows() - start);
        total += compute_loss(loss, net.predict(x.middleRows(start, n)), Tensor<T>(y.middleRows(start, n))) *
                 static_cast<double>(n);
    }
    return total / static_cast<double>(x.rows());
}

/// Mini-batch Adam training with seeded per-epoch shuffling. The train loss of
/// an epoch is the sample-weighted mean of its batch losses. With a dev split
/// the weights of the best dev-loss epoch are restored at the end.
/// Throws DataError on an empty dataset and NumericError on non-finite weights.
template <typename T>
LossHistory train(Network<T>& net, const Tensor<T>& x, const Tensor<T>& y, const Tensor<T>* dev_x,
                  const Tensor<T>* dev_y, const TrainConfig& config, const EpochCallback& on_epoch = {}) {
    if (x.rows() == 0) throw DataError("train: empty dataset");
    if (x.rows() != y.rows()) throw ArgumentError("train: feature/target row mismatch");
    if (static_cast<std::size_t>(x.cols()) != net.input_width())
        throw ArgumentError("train: feature width does not match network input");
    if (static_cast<std::size_t>(y.cols()) != net.output_width())
        throw ArgumentError("train: target width does not match network output");
    const bool use_dev = dev_x != nullptr && dev_y != nullptr && dev_x->rows() > 0;

    std::mt19937_64 rng(config.seed);
    Adam<T> optimizer(AdamConfig{config.learning_rate});
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    LossHistory history;
    double best = std::numeric_limits<double>::infinity();
    Network<T> best_net = net;
    std::size_t since_best = 0;
    const std::size_t batch = std::max<std::size_t>(1, config.batch_size);

    Tensor<T> xb, yb;
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t n = std::min(batch, order.size() - start);
            xb.resize(static_cast<Eigen::Index>(n), x.cols());
            yb.resize(static_cast<Eigen::Index>(n), y.cols());
            for (std::size_t i = 0; i < n; ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = x.row(order[start + i]);
                yb.row(static_cast<Eigen::Index>(i)) = y.row(order[start + i]);
            }
            auto acts = net.forward(xb);
            epoch_loss += compute_loss(config.loss, acts.back(), yb) * static_cast<double>(n);
            optimizer.step(net, net.backward(acts, yb, config.loss));
        }
        if (!net.all_finite()) throw NumericError("train: non-finite weights at epoch " + std::to_string(epoch));
        history.train.push_back(epoch_loss / static_cast<double>(order.size()));

        double monitored = history.train.back();
        if (use_dev) {
            monitored = evaluate_loss(net, *dev_x, *dev_y, config.loss);
            history.dev.push_back(monitored);
        }
        if (on_epoch) on_epoch(epoch, history.train.back(), use_dev ? monitored : std::nan(""));

        if (!use_dev) {
            history.best_epoch = epoch;
            continue;
        }
        if (monitored < best) {
            best = monitored;
            best_net = net;
            history.best_epoch = epoch;
            since_best = 0;
        } else if (config.patience > 0 && ++since_best >= config.patience) {
            break;
        }
    }
    if (use_dev) net = std::move(best_net);
    return history;
}

}  // namespace encod::nn
