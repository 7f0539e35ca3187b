#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "encod/models/architectures.hpp"
#include "encod/nn/adam.hpp"
#include "encod/nn/init.hpp"
#include "encod/nn/network.hpp"
#include "encod/nn/trainer.hpp"
#include "support/gradcheck.hpp"

using namespace encod;
using namespace encod::nn;
using testkit::gradient_check;
using testkit::one_hot;
using testkit::random_matrix;

namespace {

template <typename T>
std::pair<double, double> moments(const Tensor<T>& w) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) mean += w.data()[i];
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) var += (w.data()[i] - mean) * (w.data()[i] - mean);
    return {mean, var / static_cast<double>(w.size() - 1)};
}

}  // namespace

TEST(Init, GlorotBoundsAndVariance) {
    std::mt19937_64 rng(1);
    const auto one = init_glorot_uniform<double>(1, 1, rng);
    EXPECT_LE(std::fabs(one(0, 0)), std::sqrt(3.0));
    std::mt19937_64 r2(2);
    const auto w = init_glorot_uniform<double>(200, 500, r2);  // 1e5 draws
    const double limit = std::sqrt(6.0 / 700.0);
    EXPECT_LE(w.cwiseAbs().maxCoeff(), limit);
    const auto [mean, var] = moments(w);
    EXPECT_NEAR(var, limit * limit / 3.0, 0.05 * limit * limit / 3.0);
    EXPECT_NEAR(mean, 0.0, 3.0 * std::sqrt(limit * limit / 3.0 / 1e5));
}

TEST(Init, LecunNormalMoments) {
    std::mt19937_64 rng(3);
    const auto w = init_lecun_normal<double>(256, 400, rng);
    const auto [mean, var] = moments(w);
    const double target = 1.0 / 256.0;
    EXPECT_NEAR(var, target, 0.05 * target);
    EXPECT_NEAR(mean, 0.0, 3.0 * std::sqrt(target / static_cast<double>(w.size())));
}

TEST(Init, UniformBounds) {
    std::mt19937_64 rng(4);
    const auto w = init_uniform<double>(100, 1000, rng);
    EXPECT_LE(w.cwiseAbs().maxCoeff(), kUniformInitLimit);
    const auto [mean, var] = moments(w);
    EXPECT_NEAR(var, kUniformInitLimit * kUniformInitLimit / 3.0, 0.05 * kUniformInitLimit * kUniformInitLimit / 3.0);
}

TEST(Init, SameSeedSameTensor) {
    for (auto kind : {Initializer::glorot_uniform, Initializer::lecun_normal, Initializer::uniform}) {
        std::mt19937_64 a(9), b(9);
        EXPECT_EQ(init_weights<float>(kind, 30, 20, a), init_weights<float>(kind, 30, 20, b));
    }
}

TEST(Activations, ReluSeluSoftmaxValues) {
    Tensor<double> z(1, 2);
    z << -1.0, 2.0;
    Tensor<double> r = z;
    apply_activation(Activation::relu, r);
    EXPECT_EQ(r(0, 0), 0.0);
    EXPECT_EQ(r(0, 1), 2.0);
    Tensor<double> s = Tensor<double>::Zero(1, 1);
    apply_activation(Activation::selu, s);
    EXPECT_EQ(s(0, 0), 0.0);
    Tensor<double> neg(1, 1);
    neg << -1.0;
    apply_activation(Activation::selu, neg);
    EXPECT_NEAR(neg(0, 0), kSeluLambda * kSeluAlpha * (std::exp(-1.0) - 1.0), 1e-15);
    EXPECT_NEAR(kSeluLambda, 1.05070098, 1e-8);
    EXPECT_NEAR(kSeluAlpha, 1.67326324, 1e-8);
    Tensor<double> sm = Tensor<double>::Zero(1, 2);
    apply_activation(Activation::softmax, sm);
    EXPECT_DOUBLE_EQ(sm(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(sm(0, 1), 0.5);
}

TEST(Activations, SoftmaxIsStableAndNormalized) {
    auto z = random_matrix(200, 8, 5, -50, 50).cast<float>().eval();
    z(0, 0) = 1e4f;  // would overflow exp without max subtraction
    Tensor<float> p = z;
    apply_activation(Activation::softmax, p);
    EXPECT_TRUE(p.allFinite());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        EXPECT_NEAR(p.row(i).sum(), 1.0f, 1e-6f);
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            EXPECT_GE(p(i, j), 0.0f);
            EXPECT_LE(p(i, j), 1.0f);
        }
    }
}

TEST(Forward, IdentityLayerReproducesInput) {
    DenseLayer<double> l{Tensor<double>::Identity(4, 4), RowVector<double>::Zero(4), Activation::identity};
    Network<double> net({l});
    const auto x = random_matrix(3, 4, 1);
    EXPECT_EQ(net.predict(x), x);
    EXPECT_THROW(net.forward(random_matrix(3, 5, 1)), ArgumentError);
}

TEST(Forward, PredictOneMatchesBatch) {
    auto net = Network<float>::build(models::build_binary());
    const Tensor<float> x = random_matrix(5, 256, 2, 0, 2).cast<float>();
    const auto batch = net.predict(x);
    InferenceWorkspace<float> ws;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const RowVector<float> row = x.row(i);
        const auto out = net.predict_one({row.data(), 256}, ws);
        for (Eigen::Index j = 0; j < 2; ++j) EXPECT_NEAR(out[j], batch(i, j), 1e-6);
    }
}

TEST(Backward, ToyNetMatchesFiniteDifferencesEverywhere) {
    NetworkSpec spec{{5, 7, 6, 3}, {Activation::relu, Activation::selu, Activation::softmax}};
    spec.rng_seed = 3;
    auto net = Network<double>::build(spec);
    // Non-zero biases so ReLU kinks are away from the probe points.
    for (auto& l : net.layers()) l.bias = random_matrix(1, l.bias.size(), 8, -0.3, 0.3);
    EXPECT_LT(gradient_check(net, random_matrix(4, 5, 9), one_hot(4, 3, 1), Loss::cross_entropy, 1000, 1), 1e-4);

    NetworkSpec mse{{4, 6, 4}, {Activation::relu, Activation::sigmoid}, Initializer::uniform, Loss::mse};
    auto ae = Network<double>::build(mse);
    for (auto& l : ae.layers()) l.bias = random_matrix(1, l.bias.size(), 10, -0.3, 0.3);
    EXPECT_LT(gradient_check(ae, random_matrix(3, 4, 11, 0, 1), random_matrix(3, 4, 12, 0, 1), Loss::mse, 1000, 2),
              1e-4);
}

TEST(Backward, ShippedArchitecturesMatchFiniteDifferences) {
    const auto x = random_matrix(4, 256, 21, 0, 2);
    std::vector<std::pair<NetworkSpec, Loss>> specs = {{models::build_binary(2048, 5), Loss::cross_entropy},
                                                       {models::build_multiclass(8, 5), Loss::cross_entropy}};
    for (auto v : {models::AutoencoderVariant::ae1, models::AutoencoderVariant::ae2}) {
        const auto ae = models::build_autoencoder(v, 5);
        specs.emplace_back(ae.autoencoder, Loss::mse);
        specs.emplace_back(ae.head, Loss::cross_entropy);
    }
    for (const auto& [spec, loss] : specs) {
        auto net = Network<double>::build(spec);
        for (auto& l : net.layers()) l.bias = random_matrix(1, l.bias.size(), 30, -0.1, 0.1);
        const Tensor<double> in = spec.input_width() == 256 ? x : random_matrix(4, spec.input_width(), 22, 0, 2);
        const Tensor<double> y = loss == Loss::mse ? random_matrix(4, spec.output_width(), 23, 0, 1)
                                                   : one_hot(4, spec.output_width(), 24);
        EXPECT_LT(gradient_check(net, in, y, loss, 40, 7), 1e-4) << spec.dims.size() << " dims";
    }
}

TEST(Backward, ZeroLossPointHasZeroGradient) {
    NetworkSpec spec{{3, 4, 2}, {Activation::relu, Activation::identity}, Initializer::glorot_uniform, Loss::mse};
    auto net = Network<double>::build(spec);
    const auto x = random_matrix(5, 3, 1);
    const Tensor<double> y = net.predict(x);
    const auto g = net.backward(net.forward(x), y, Loss::mse);
    for (const auto& w : g.weights) EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
    for (const auto& b : g.bias) EXPECT_EQ(b.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Backward, DuplicatedSampleKeepsMeanGradient) {
    auto net = Network<double>::build(models::build_binary(2048, 2));
    const auto x1 = random_matrix(1, 256, 3, 0, 2);
    const auto y1 = one_hot(1, 2, 4);
    Tensor<double> x2(2, 256), y2(2, 2);
    x2 << x1, x1;
    y2 << y1, y1;
    const auto g1 = net.backward(net.forward(x1), y1, Loss::cross_entropy);
    const auto g2 = net.backward(net.forward(x2), y2, Loss::cross_entropy);
    for (std::size_t i = 0; i < g1.weights.size(); ++i) {
        EXPECT_LT((g1.weights[i] - g2.weights[i]).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT((g1.bias[i] - g2.bias[i]).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Adam, ZeroGradientLeavesParamsAlone) {
    auto net = Network<double>::build(NetworkSpec{{3, 2}, {Activation::softmax}});
    const auto before = net.layers()[0].weights;
    Gradients<double> g{{Tensor<double>::Zero(3, 2)}, {RowVector<double>::Zero(2)}};
    Adam<double> opt;
    opt.step(net, g);
    EXPECT_EQ(opt.timestep(), 1u);
    EXPECT_EQ(net.layers()[0].weights, before);
}

TEST(Adam, ConstantGradientStepsApproachLearningRate) {
    DenseLayer<double> l{Tensor<double>::Zero(1, 2), RowVector<double>::Zero(2), Activation::identity};
    Network<double> net({l});
    Tensor<double> gw(1, 2);
    gw << 0.3, 3.0;  // g and 10 g
    Gradients<double> g{{gw}, {RowVector<double>::Zero(2)}};
    Adam<double> opt(AdamConfig{1e-3});
    Tensor<double> prev = net.layers()[0].weights;
    for (int t = 0; t < 2000; ++t) {
        prev = net.layers()[0].weights;
        opt.step(net, g);
    }
    const Tensor<double> step = (net.layers()[0].weights - prev).cwiseAbs();
    EXPECT_NEAR(step(0, 0), 1e-3, 1e-6);
    EXPECT_NEAR(step(0, 1), 1e-3, 1e-6);
    EXPECT_NEAR(step(0, 0) / step(0, 1), 1.0, 1e-4);
    EXPECT_LT(net.layers()[0].weights(0, 0), 0.0);  // moves against the gradient
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
    DenseLayer<double> l{Tensor<double>::Zero(1, 3), RowVector<double>::Zero(3), Activation::identity};
    Network<double> net({l});
    Tensor<double> gw(1, 3);
    gw << 5.0, -0.01, 2.0;
    Adam<double> opt(AdamConfig{0.01});
    opt.step(net, Gradients<double>{{gw}, {RowVector<double>::Zero(3)}});
    EXPECT_NEAR(net.layers()[0].weights(0, 0), -0.01, 1e-8);
    EXPECT_NEAR(net.layers()[0].weights(0, 1), 0.01, 1e-5);
}

TEST(Trainer, SeparableToySet) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.3);
    Tensor<float> x(400, 2), y = Tensor<float>::Zero(400, 2);
    for (Eigen::Index i = 0; i < 400; ++i) {
        const int c = i % 2;
        x(i, 0) = static_cast<float>((c ? 1.5 : -1.5) + noise(rng));
        x(i, 1) = static_cast<float>((c ? -1.0 : 1.0) + noise(rng));
        y(i, c) = 1.0f;
    }
    NetworkSpec spec{{2, 8, 2}, {Activation::relu, Activation::softmax}};
    auto net = Network<float>::build(spec);
    TrainConfig cfg;
    cfg.max_epochs = 50;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.01;
    train<float>(net, x, y, nullptr, nullptr, cfg);
    const auto p = net.predict(x);
    int correct = 0;
    for (Eigen::Index i = 0; i < 400; ++i) {
        Eigen::Index arg;
        p.row(i).maxCoeff(&arg);
        correct += y(i, arg) == 1.0f;
    }
    EXPECT_GE(correct / 400.0, 0.99);
}

TEST(Trainer, SameSeedSameHistoryAndWeights) {
    const Tensor<float> x = random_matrix(300, 256, 1, 0, 2).cast<float>();
    const Tensor<float> y = one_hot(300, 2, 2).cast<float>();
    const Tensor<float> dx = random_matrix(40, 256, 3, 0, 2).cast<float>();
    const Tensor<float> dy = one_hot(40, 2, 4).cast<float>();
    TrainConfig cfg;
    cfg.max_epochs = 6;
    cfg.seed = 11;
    auto a = Network<float>::build(models::build_binary());
    auto b = Network<float>::build(models::build_binary());
    const auto ha = train(a, x, y, &dx, &dy, cfg);
    const auto hb = train(b, x, y, &dx, &dy, cfg);
    EXPECT_EQ(ha, hb);
    for (std::size_t i = 0; i < a.layers().size(); ++i) EXPECT_EQ(a.layers()[i].weights, b.layers()[i].weights);
}

TEST(Trainer, OneSampleLossDecreases) {
    NetworkSpec spec{{6, 5, 6}, {Activation::relu, Activation::sigmoid}, Initializer::uniform, Loss::mse};
    auto net = Network<double>::build(spec);
    const auto x = random_matrix(1, 6, 1, 0, 1);
    TrainConfig cfg;
    cfg.max_epochs = 5;
    cfg.loss = Loss::mse;
    cfg.batch_size = 1;
    const auto h = train<double>(net, x, x, nullptr, nullptr, cfg);
    ASSERT_EQ(h.train.size(), 5u);
    for (std::size_t i = 1; i < h.train.size(); ++i) EXPECT_LT(h.train[i], h.train[i - 1]);
}

TEST(Trainer, RestoresBestDevWeightsAndStopsEarly) {
    const Tensor<float> x = random_matrix(64, 4, 1).cast<float>();
    const Tensor<float> y = one_hot(64, 2, 2).cast<float>();  // labels are noise
    const Tensor<float> dx = random_matrix(64, 4, 3).cast<float>();
    const Tensor<float> dy = one_hot(64, 2, 4).cast<float>();
    NetworkSpec spec{{4, 64, 2}, {Activation::relu, Activation::softmax}};
    auto net = Network<float>::build(spec);
    TrainConfig cfg;
    cfg.max_epochs = 200;
    cfg.patience = 3;
    cfg.learning_rate = 0.05;
    const auto h = train(net, x, y, &dx, &dy, cfg);
    EXPECT_LT(h.train.size(), 200u);
    EXPECT_EQ(h.train.size(), h.best_epoch + 1 + cfg.patience);
    EXPECT_NEAR(evaluate_loss(net, dx, dy, Loss::cross_entropy), h.dev[h.best_epoch], 1e-6);
}

TEST(Trainer, RejectsEmptyOrMismatchedData) {
    auto net = Network<float>::build(NetworkSpec{{3, 2}, {Activation::softmax}});
    TrainConfig cfg;
    EXPECT_THROW(train<float>(net, Tensor<float>(0, 3), Tensor<float>(0, 2), nullptr, nullptr, cfg), DataError);
    EXPECT_THROW(train<float>(net, Tensor<float>::Zero(4, 3), Tensor<float>::Zero(3, 2), nullptr, nullptr, cfg),
                 ArgumentError);
}

TEST(Trainer, NonFiniteWeightsAreCaught) {
    auto net = Network<float>::build(NetworkSpec{{2, 2}, {Activation::softmax}});
    Tensor<float> x(2, 2);
    x << std::nanf(""), 1.0f, 0.0f, 1.0f;
    const Tensor<float> y = Tensor<float>::Identity(2, 2);
    TrainConfig cfg;
    cfg.max_epochs = 2;
    EXPECT_THROW(train<float>(net, x, y, nullptr, nullptr, cfg), NumericError);
}

TEST(NetworkSpec, ValidatesChains) {
    EXPECT_THROW((NetworkSpec{{3, 2, 2}, {Activation::softmax, Activation::relu}}.validate()), ArgumentError);
    EXPECT_THROW((NetworkSpec{{3, 2}, {Activation::relu, Activation::relu}}.validate()), ArgumentError);
    EXPECT_NO_THROW((NetworkSpec{{3, 2}, {Activation::softmax}}.validate()));
}
