#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "encod/corpus/codecs.hpp"
#include "encod/error.hpp"
#include "encod/eval/benchmark.hpp"
#include "encod/eval/detectors.hpp"
#include "encod/eval/entropy_profile.hpp"
#include "encod/eval/metrics.hpp"
#include "encod/eval/split.hpp"
#include "encod/randomness/chi_square.hpp"
#include "encod/randomness/hedge.hpp"
#include "encod/randomness/nist.hpp"
#include "encod/util/digest.hpp"
#include "support/oracles.hpp"

using namespace encod;
using namespace encod::eval;
using corpus::CodecLabel;
using corpus::ManifestEntry;

namespace {

std::vector<ManifestEntry> entries(std::size_t n, CodecLabel label = CodecLabel::enc, std::size_t size = 512) {
    std::vector<ManifestEntry> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(ManifestEntry{"f" + std::to_string(i % 7), i * size, size, label, "o", ""});
    return out;
}

std::set<std::pair<std::string, std::uint64_t>> keys(const std::vector<ManifestEntry>& es) {
    std::set<std::pair<std::string, std::uint64_t>> out;
    for (const auto& e : es) out.emplace(e.path, e.offset);
    return out;
}

util::Bytes prose(std::size_t n, unsigned seed) {
    static const char* words[] = {"the", "cipher", "block", "of", "random", "text", "and", "a", "fragment", "file"};
    std::mt19937 rng(seed);
    std::string s;
    while (s.size() < n) {
        s += words[rng() % 10];
        s += ' ';
    }
    return util::Bytes(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
}

// Encrypted fragments versus gzip fragments of the same prose.
std::vector<LabeledFragment> labeled(std::size_t per_class, std::size_t size, unsigned seed) {
    std::vector<LabeledFragment> out;
    for (std::size_t i = 0; i < per_class; ++i) {
        const auto plain = prose(size * 8, seed + static_cast<unsigned>(i));
        const auto enc = corpus::transform_file(plain, CodecLabel::enc, seed + i);
        out.push_back({util::Bytes(enc.begin(), enc.begin() + static_cast<std::ptrdiff_t>(size)), true});
        const auto gz = corpus::transform_file(plain, CodecLabel::gzip, seed + i);
        // Skip the gzip header; deflate payload is the interesting part.
        out.push_back({util::Bytes(gz.begin() + 20, gz.begin() + 20 + static_cast<std::ptrdiff_t>(size)), false});
    }
    return out;
}

}  // namespace

TEST(Split, ThousandSamplesCutByRatio) {
    const auto s = split_dataset(entries(1000), SplitSpec{});
    EXPECT_EQ(s.train.size(), 850u);
    EXPECT_EQ(s.dev.size(), 50u);
    EXPECT_EQ(s.test.size(), 100u);
}

TEST(Split, DisjointAndExhaustive) {
    auto all = entries(400);
    auto more = entries(250, CodecLabel::gzip, 1024);
    all.insert(all.end(), more.begin(), more.end());
    const auto s = split_dataset(all, SplitSpec{0.7, 0.1, 0.2, 9});
    EXPECT_EQ(s.train.size() + s.dev.size() + s.test.size(), all.size());
    std::multiset<std::tuple<int, std::string, std::uint64_t>> seen;
    for (const auto* part : {&s.train, &s.dev, &s.test})
        for (const auto& e : *part) seen.emplace(static_cast<int>(e.label), e.path, e.offset);
    std::multiset<std::tuple<int, std::string, std::uint64_t>> expected;
    for (const auto& e : all) expected.emplace(static_cast<int>(e.label), e.path, e.offset);
    EXPECT_EQ(seen, expected);
    // Stratified: each group is cut separately.
    std::size_t gz_test = 0;
    for (const auto& e : s.test) gz_test += e.label == CodecLabel::gzip;
    EXPECT_EQ(gz_test, 50u);
}

TEST(Split, DeterministicPerSeed) {
    const auto all = entries(300);
    const auto a = split_dataset(all, SplitSpec{0.8, 0.1, 0.1, 4});
    const auto b = split_dataset(all, SplitSpec{0.8, 0.1, 0.1, 4});
    const auto c = split_dataset(all, SplitSpec{0.8, 0.1, 0.1, 5});
    EXPECT_EQ(a.test, b.test);
    EXPECT_EQ(a.train, b.train);
    EXPECT_NE(keys(a.test), keys(c.test));
}

TEST(Split, RejectsBadInput) {
    EXPECT_THROW(split_dataset({}, SplitSpec{}), DataError);
    EXPECT_THROW(split_dataset(entries(2), SplitSpec{}), DataError);
    EXPECT_THROW(split_dataset(entries(100), SplitSpec{0.5, 0.2, 0.2, 1}), ArgumentError);
    EXPECT_THROW(split_dataset(entries(100), SplitSpec{1.1, -0.1, 0.0, 1}), ArgumentError);
    EXPECT_NO_THROW(split_dataset(entries(3), SplitSpec{}));
}

TEST(Split, ManifestSplitKeepsHeader) {
    corpus::Manifest m;
    m.seed = 11;
    m.quota = 99;
    m.entries = entries(40);
    const auto s = split_manifest(m, SplitSpec{});
    EXPECT_EQ(s.test.seed, 11u);
    EXPECT_EQ(s.train.quota, 99u);
    EXPECT_EQ(s.train.entries.size() + s.dev.entries.size() + s.test.entries.size(), 40u);
}

TEST(Metrics, PerfectPredictorIsDiagonal) {
    const std::vector<std::string> labels = {"a", "b", "c"};
    std::vector<std::size_t> t = {0, 1, 2, 2, 1, 0, 0};
    const auto m = compute_metrics(labels, t, t);
    EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
    EXPECT_EQ(m.confusion.trace(), m.confusion.total());
    for (const auto& c : m.per_class) {
        EXPECT_DOUBLE_EQ(c.precision, 1.0);
        EXPECT_DOUBLE_EQ(c.recall, 1.0);
        EXPECT_DOUBLE_EQ(c.f1, 1.0);
    }
    EXPECT_EQ(m.for_label("a").support, 3u);
}

TEST(Metrics, HandComputedBinaryCase) {
    // truth:     e e e e c c
    // predicted: e e e c e c
    const auto m = compute_metrics({"e", "c"}, {0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 0, 1});
    EXPECT_DOUBLE_EQ(m.accuracy, 4.0 / 6.0);
    EXPECT_DOUBLE_EQ(m.for_label("e").precision, 3.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.for_label("e").recall, 3.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.for_label("c").precision, 1.0 / 2.0);
    EXPECT_DOUBLE_EQ(m.for_label("c").recall, 1.0 / 2.0);
    EXPECT_EQ(m.confusion.counts, (std::vector<std::vector<std::uint64_t>>{{3, 1}, {1, 1}}));
    EXPECT_EQ(m.confusion.transposed().counts, (std::vector<std::vector<std::uint64_t>>{{3, 1}, {1, 1}}));
}

TEST(Metrics, UniformRandomPredictorNearChance) {
    const std::size_t n = 20000, k = 5;
    std::mt19937_64 rng(3);
    std::vector<std::size_t> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = rng() % k;
        p[i] = rng() % k;
    }
    const auto m = compute_metrics({"a", "b", "c", "d", "e"}, t, p);
    const double sd = std::sqrt(0.2 * 0.8 / n);
    EXPECT_NEAR(m.accuracy, 0.2, 3 * sd);
}

TEST(Metrics, MajorityPredictorScoresTheMajorityShare) {
    std::vector<std::size_t> t(100, 0);
    for (std::size_t i = 0; i < 30; ++i) t[i] = 1;
    const auto m = compute_metrics({"x", "y"}, t, std::vector<std::size_t>(100, 0));
    EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
    EXPECT_DOUBLE_EQ(m.for_label("y").recall, 0.0);
    EXPECT_DOUBLE_EQ(m.for_label("y").precision, 0.0);  // nothing predicted
}

TEST(Metrics, RejectsBadInput) {
    EXPECT_THROW(compute_metrics({"a", "b"}, {}, {}), DataError);
    EXPECT_THROW(compute_metrics({"a", "b"}, {0, 1}, {0}), ArgumentError);
    EXPECT_THROW(compute_metrics({"a", "b"}, {0, 2}, {0, 1}), ArgumentError);
}

TEST(Metrics, CsvAndJson) {
    const auto m = compute_metrics({"enc", "png"}, {0, 1, 1}, {0, 0, 1});
    EXPECT_EQ(m.confusion.to_csv(), "truth\\predicted,enc,png\nenc,1,0\npng,1,1\n");
    const auto j = nlohmann::json::parse(m.to_json());
    EXPECT_DOUBLE_EQ(j["accuracy"].get<double>(), 2.0 / 3.0);
    EXPECT_EQ(j["total"].get<int>(), 3);
    EXPECT_EQ(j["confusion"]["labels"][1], "png");
    EXPECT_EQ(j["per_class"].size(), 2u);
}

TEST(Detectors, NamesRoundTrip) {
    for (auto k : {DetectorKind::entropy_threshold, DetectorKind::chi_abs, DetectorKind::chi_ci, DetectorKind::nist_vote,
                   DetectorKind::hedge})
        EXPECT_EQ(detector_from_string(to_string(k)), k);
    EXPECT_THROW(detector_from_string("coin_flip"), ArgumentError);
}

TEST(Detectors, EntropyThresholdSeparatesEasyCase) {
    std::vector<LabeledFragment> dev;
    for (unsigned i = 0; i < 50; ++i) {
        dev.push_back({testkit::random_bytes(1024, i), true});
        dev.push_back({prose(1024, i), false});
    }
    const double t = fit_entropy_threshold(dev);
    EXPECT_GT(t, 4.5);
    EXPECT_LT(t, 7.9);
    DetectorContext ctx;
    ctx.entropy_threshold = t;
    EXPECT_DOUBLE_EQ(evaluate_detector(DetectorKind::entropy_threshold, dev, ctx).accuracy, 1.0);
}

TEST(Detectors, ConstantVerdictScoresHalfOnBalancedData) {
    const auto frags = labeled(40, 1024, 5);
    DetectorContext ctx;
    ctx.entropy_threshold = -1.0;  // everything is random
    const auto m = evaluate_detector(DetectorKind::entropy_threshold, frags, ctx);
    EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
    EXPECT_EQ(m.confusion.counts[1][0], 40u);
    ctx.entropy_threshold = 9.0;  // nothing is
    EXPECT_DOUBLE_EQ(evaluate_detector(DetectorKind::entropy_threshold, frags, ctx).accuracy, 0.5);
}

TEST(Detectors, OrderAndThreadsDoNotMatter) {
    auto frags = labeled(30, 1024, 9);
    std::vector<std::vector<std::uint8_t>> enc;
    for (int i = 0; i < 120; ++i) enc.push_back(testkit::random_bytes(1024, 500 + i));
    DetectorContext ctx;
    ctx.calibration = randomness::calibrate_chi_abs({{1024, enc}});
    ctx.hedge.calibration = ctx.calibration;
    for (auto kind : {DetectorKind::chi_abs, DetectorKind::chi_ci, DetectorKind::nist_vote, DetectorKind::hedge}) {
        const auto a = evaluate_detector(kind, frags, ctx);
        auto shuffled = frags;
        std::mt19937 rng(1);
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto b = evaluate_detector(kind, shuffled, ctx, {"encrypted", "compressed"}, 3);
        EXPECT_EQ(a.confusion.counts, b.confusion.counts) << to_string(kind);
    }
}

TEST(Detectors, VerdictMatchesUnderlyingTest) {
    std::vector<std::vector<std::uint8_t>> enc;
    for (int i = 0; i < 120; ++i) enc.push_back(testkit::random_bytes(512, i));
    DetectorContext ctx;
    ctx.calibration = randomness::calibrate_chi_abs({{512, enc}});
    ctx.hedge.calibration = ctx.calibration;
    for (const auto& f : labeled(10, 512, 3)) {
        EXPECT_EQ(detector_says_random(DetectorKind::chi_ci, f.bytes, ctx), randomness::chi_ci_test(f.bytes).passed);
        EXPECT_EQ(detector_says_random(DetectorKind::hedge, f.bytes, ctx),
                  randomness::hedge(f.bytes, ctx.hedge).passed);
    }
}

TEST(EntropyProfile, Percentiles) {
    EXPECT_DOUBLE_EQ(percentile({3, 1, 2}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(percentile({5}, 0.95), 5.0);
    EXPECT_DOUBLE_EQ(percentile({0, 10}, 0.05), 0.5);
    const auto r = summarize_entropies("enc", 512, {7.5, 7.6, 7.7, 7.8, 7.9});
    EXPECT_EQ(r.count, 5u);
    EXPECT_DOUBLE_EQ(r.min, 7.5);
    EXPECT_DOUBLE_EQ(r.median, 7.7);
    EXPECT_DOUBLE_EQ(r.max, 7.9);
    EXPECT_LE(r.p5, r.median);
    EXPECT_GE(r.p95, r.median);
}

TEST(EntropyProfile, CsvRows) {
    std::vector<EntropyProfileRow> rows = {summarize_entropies("enc", 512, {7.0, 8.0})};
    std::ostringstream out;
    write_entropy_profile_csv(out, rows);
    const auto text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "label,size,count,min,p5,median,p95,max");
    EXPECT_NE(text.find("enc,512,2,"), std::string::npos);
}

TEST(Benchmark, RejectsTooLittleData) {
    const BenchTarget t{"noop", [](std::span<const std::uint8_t> f) { return static_cast<int>(f[0]); }};
    std::vector<std::vector<std::uint8_t>> frags(99, std::vector<std::uint8_t>(16, 1));
    EXPECT_THROW(benchmark({t}, frags), ArgumentError);
    frags.emplace_back(16, 1);
    EXPECT_THROW(benchmark({t}, frags, BenchmarkOptions{9, 0}), ArgumentError);
    EXPECT_NO_THROW(benchmark({t}, frags, BenchmarkOptions{10, 0}));
}

TEST(Benchmark, HedgeCostsMoreThanOneComponent) {
    std::vector<std::vector<std::uint8_t>> frags, enc;
    for (int i = 0; i < 120; ++i) enc.push_back(testkit::random_bytes(1024, 900 + i));
    for (int i = 0; i < 100; ++i) frags.push_back(testkit::random_bytes(1024, i));
    randomness::HedgeConfig hc;
    hc.calibration = randomness::calibrate_chi_abs({{1024, enc}});
    const std::vector<BenchTarget> targets = {
        {"hedge", [&](std::span<const std::uint8_t> f) { return randomness::hedge(f, hc).passed ? 1 : 0; }},
        {"chi_ci", [](std::span<const std::uint8_t> f) { return randomness::chi_ci_test(f).passed ? 1 : 0; }},
    };
    const auto r = benchmark(targets, frags, BenchmarkOptions{10, 1});
    ASSERT_EQ(r.rows.size(), 2u);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.mean, 0.0);
        EXPECT_GE(row.stddev, 0.0);
        EXPECT_EQ(row.samples, 100u);
        EXPECT_EQ(row.repetitions, 10u);
    }
    EXPECT_GT(r.row("hedge").mean, r.row("chi_ci").mean);
    std::ostringstream out;
    r.write_csv(out);
    EXPECT_NE(out.str().find("hedge"), std::string::npos);
    EXPECT_THROW(r.row("missing"), ArgumentError);
}
