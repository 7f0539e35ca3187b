#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "encod/corpus/codecs.hpp"
#include "encod/error.hpp"
#include "encod/util/digest.hpp"
#include "encod/features/feature_csv.hpp"
#include "encod/features/histogram.hpp"
#include "encod/features/scaler.hpp"
#include "support/oracles.hpp"

using namespace encod;
using namespace encod::features;

TEST(ByteHistogram, SingleValueMass) {
    const auto v = byte_histogram(util::Bytes(512, 0x41));
    for (std::size_t i = 0; i < 256; ++i) EXPECT_EQ(v[i], i == 0x41 ? 1.0 : 0.0);
}

TEST(ByteHistogram, EachValueOnce) {
    util::Bytes b(256);
    std::iota(b.begin(), b.end(), 0);
    const auto v = byte_histogram(b);
    for (double f : v.values) EXPECT_EQ(f, 1.0 / 256);
}

TEST(ByteHistogram, EmptyIsAnError) { EXPECT_THROW(byte_histogram(util::Bytes{}), ArgumentError); }

TEST(ByteHistogram, SumsToOneAndPermutationInvariant) {
    std::mt19937 rng(3);
    for (std::size_t len : {1u, 7u, 512u, 2048u, 8191u}) {
        auto b = testkit::random_bytes(len, len);
        // Skew some inputs so not every case is near uniform.
        if (len % 2) for (auto& x : b) x &= 0x0f;
        const auto v = byte_histogram(b);
        EXPECT_NEAR(std::accumulate(v.values.begin(), v.values.end(), 0.0), 1.0, 1e-9);
        for (double f : v.values) EXPECT_GE(f, 0.0);
        std::shuffle(b.begin(), b.end(), rng);
        EXPECT_EQ(byte_histogram(b), v);
    }
}

TEST(ByteHistogram, CountsMatchNaiveLoop) {
    const auto b = testkit::random_bytes(5000, 11);
    const auto c = byte_counts(b);
    std::array<std::uint32_t, 256> naive{};
    for (auto x : b) ++naive[x];
    EXPECT_EQ(c, naive);
}

TEST(ByteHistogram, EncryptedFragmentsAreFlat) {
    // Monte Carlo over AES-CBC output of low-entropy plaintext. The largest
    // observed bin over 200 fragments was 0.0107 (22 of 2048), well below 0.03.
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const util::Bytes plain(4096, static_cast<std::uint8_t>('a' + seed % 26));
        const auto c = corpus::transform_file(plain, corpus::CodecLabel::enc, seed);
        const auto v = byte_histogram(util::ByteView(c.data(), 2048));
        worst = std::max(worst, *std::max_element(v.values.begin(), v.values.end()));
    }
    EXPECT_LT(worst, 0.03);
}

TEST(Scaler, SingleVectorFit) {
    const auto v = byte_histogram(testkit::random_bytes(300, 2));
    const auto p = fit_scaler(std::vector<FeatureVector>{v});
    EXPECT_EQ(p.min, v.values);
    EXPECT_EQ(p.max, v.values);
    // Every dimension is constant, so everything maps to zero.
    for (double x : apply_scaler(v, p)) EXPECT_EQ(x, 0.0);
}

TEST(Scaler, TwoVectorFit) {
    FeatureVector zero, flat;
    flat.values.fill(1.0 / 256);
    const auto p = fit_scaler(std::vector<FeatureVector>{zero, flat});
    for (std::size_t i = 0; i < 256; ++i) {
        EXPECT_EQ(p.min[i], 0.0);
        EXPECT_EQ(p.max[i], 1.0 / 256);
    }
    for (double x : apply_scaler(zero, p)) EXPECT_EQ(x, 0.0);
    for (double x : apply_scaler(flat, p)) EXPECT_EQ(x, 2.0);
}

TEST(Scaler, FitIsIdempotent) {
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 20; ++i) vs.push_back(byte_histogram(testkit::random_bytes(512, i)));
    EXPECT_EQ(fit_scaler(vs), fit_scaler(vs));
    EXPECT_THROW(fit_scaler(std::vector<FeatureVector>{}), ArgumentError);
}

TEST(Scaler, UnitRangeDoublesTheInput) {
    ScalerParams p;
    p.min.fill(0.0);
    p.max.fill(1.0);
    const auto v = byte_histogram(testkit::random_bytes(1024, 1));
    const auto out = apply_scaler(v, p);
    for (std::size_t i = 0; i < 256; ++i) EXPECT_DOUBLE_EQ(out[i], 2.0 * v[i]);
}

TEST(Scaler, TrainingSetMapsIntoRangeAndUnseenIsNotClipped) {
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 50; ++i) vs.push_back(byte_histogram(testkit::random_bytes(512, 100 + i)));
    const auto p = fit_scaler(vs);
    for (const auto& v : vs)
        for (double x : apply_scaler(v, p)) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 2.0 + 1e-12);
        }
    const auto spike = byte_histogram(util::Bytes(512, 0));
    EXPECT_GT(apply_scaler(spike, p)[0], 2.0);
}

TEST(Scaler, MonotoneAndInvertible) {
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 30; ++i) vs.push_back(byte_histogram(testkit::random_bytes(700, 200 + i)));
    const auto p = fit_scaler(vs);
    const auto probe = byte_histogram(testkit::random_bytes(700, 999));
    const auto back = invert_scaler(apply_scaler(probe, p), p);
    for (std::size_t i = 0; i < 256; ++i) {
        if (p.max[i] > p.min[i]) EXPECT_NEAR(back[i], probe[i], 1e-15);
        FeatureVector lo = probe, hi = probe;
        hi[i] += 0.001;
        EXPECT_LE(apply_scaler(lo, p)[i], apply_scaler(hi, p)[i]);
    }
}

TEST(Scaler, FloatVariantMatchesDouble) {
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 10; ++i) vs.push_back(byte_histogram(testkit::random_bytes(512, 300 + i)));
    const auto p = fit_scaler(vs);
    std::vector<float> out(256);
    apply_scaler(vs[0], p, out);
    const auto ref = apply_scaler(vs[0], p);
    for (std::size_t i = 0; i < 256; ++i) EXPECT_FLOAT_EQ(out[i], static_cast<float>(ref[i]));
}

TEST(FeatureCsv, HeaderAndRow) {
    std::ostringstream out;
    write_feature_csv_header(out);
    write_feature_csv_row(out, byte_histogram(util::Bytes(4, 1)), "png", 512);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header.substr(0, 6), "f0,f1,");
    EXPECT_EQ(header.substr(header.size() - 15), "f255,label,size");
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 257);
    EXPECT_EQ(row.substr(0, 4), "0,1,");
    EXPECT_EQ(row.substr(row.size() - 8), ",png,512");
}
