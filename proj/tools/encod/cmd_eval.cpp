#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "encod/error.hpp"
#include "encod/eval/benchmark.hpp"
#include "encod/eval/detectors.hpp"
#include "encod/eval/entropy_profile.hpp"
#include "encod/eval/evaluate.hpp"
#include "encod/models/inference.hpp"
#include "encod/models/training.hpp"
#include "encod/randomness/entropy.hpp"

namespace encod::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::vector<corpus::ManifestEntry> entries_not_in(const std::vector<corpus::ManifestEntry>& all,
                                                  const std::vector<corpus::ManifestEntry>& used) {
    auto key = [](const corpus::ManifestEntry& e) { return std::make_pair(e.path, e.offset); };
    std::set<std::pair<std::string, std::uint64_t>> taken;
    for (const auto& e : used) taken.insert(key(e));
    std::vector<corpus::ManifestEntry> out;
    for (const auto& e : all)
        if (!taken.count(key(e))) out.push_back(e);
    return out;
}

std::vector<eval::LabeledFragment> read_labeled(const corpus::Manifest& m,
                                                const std::vector<std::vector<corpus::ManifestEntry>>& classes) {
    corpus::FragmentReader reader(m.base_dir);
    std::vector<eval::LabeledFragment> out;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const auto& e : classes[c]) out.push_back({reader.read(e), c == 0});
    return out;
}

}  // namespace

void register_eval(CLI::App& app, Action& action) {
    auto* ev = app.add_subcommand("eval", "Evaluate models and statistical detectors");
    ev->require_subcommand(1);

    struct ModelArgs {
        std::string bundle;
        std::string manifest;
        std::string out;
        std::string confusion_csv;
        bool binarize = false;
        unsigned jobs = 0;
    };
    auto ma = std::make_shared<ModelArgs>();
    auto* model = ev->add_subcommand("model", "Accuracy, per-class metrics and confusion of a bundle");
    model->add_option("--bundle", ma->bundle, "Model bundle")->required();
    model->add_option("--manifest", ma->manifest, "Test manifest (e.g. <bundle>.test.jsonl)")->required();
    model->add_option("--out", ma->out, "JSON report path (default stdout)");
    model->add_option("--confusion-csv", ma->confusion_csv, "Also write the confusion matrix as CSV");
    model->add_flag("--binarize", ma->binarize, "Score a multi-class bundle as encrypted vs compressed");
    model->add_option("--jobs", ma->jobs, "Worker threads");
    model->callback([ma, &action] {
        action = [ma] {
            const auto bundle = models::load_bundle(ma->bundle);
            const auto m = corpus::read_manifest(ma->manifest);
            const auto entries = m.select_size(bundle.size_class);
            const unsigned jobs = resolve_jobs(ma->jobs);
            const auto metrics = ma->binarize ? eval::evaluate_binarized(bundle, m, entries, jobs)
                                              : eval::evaluate_model(bundle, m, entries, jobs);
            ordered_json report = {{"bundle", fs::absolute(ma->bundle).generic_string()},
                                   {"bundle_sha256", models::bundle_digest(bundle)},
                                   {"kind", models::to_string(bundle.kind)},
                                   {"size", bundle.size_class},
                                   {"binarized", ma->binarize}};
            const auto parsed = ordered_json::parse(metrics.to_json());
            for (auto& [k, v] : parsed.items()) report[k] = v;
            const std::string text = report.dump(2) + "\n";
            std::cout << "accuracy: " << metrics.accuracy << " over " << metrics.confusion.total() << " fragments\n";
            if (!ma->confusion_csv.empty()) write_text(resolve_out(ma->confusion_csv), metrics.confusion.to_csv());
            if (ma->out.empty()) {
                std::cout << text;
                return;
            }
            const auto out = resolve_out(ma->out);
            write_text(out, text);
            write_provenance(out, "eval model",
                             {{"bundle", ma->bundle}, {"manifest", ma->manifest}, {"binarize", ma->binarize}},
                             {ma->bundle, ma->manifest});
        };
    });

    struct DetArgs {
        std::string which = "hedge";
        std::string manifest;
        std::size_t size = 2048;
        std::vector<std::string> targets;
        std::size_t quota = 1000;
        std::uint64_t seed = kDefaultSeed;
        std::string calibration;
        double k = 2.0;
        double alpha = randomness::kDefaultAlpha;
        double threshold = -1.0;
        bool cusum_either = false;
        std::string out;
        unsigned jobs = 0;
    };
    auto da = std::make_shared<DetArgs>();
    auto* det = ev->add_subcommand("detector", "Encrypted vs non-encrypted accuracy of a statistical detector");
    det->add_option("--which", da->which, "entropy, chi_abs, chi_ci, nist_vote or hedge");
    det->add_option("--manifest", da->manifest, "Corpus manifest")->required();
    det->add_option("--size", da->size, "Fragment size class");
    det->add_option("--target", da->targets, "Non-encrypted labels or macros (default: every other label present)")
        ->delimiter(',');
    det->add_option("--quota", da->quota, "Fragments per class (non-encrypted spread evenly over its labels)");
    det->add_option("--seed", da->seed, "Sampling seed");
    det->add_option("--calibration", da->calibration,
                    "Chi-square calibration JSON (default: fitted on enc fragments left out of the evaluation)");
    det->add_option("--k", da->k, "Chi-square absolute window multiplier");
    det->add_option("--alpha", da->alpha, "Significance level of the bit-level tests");
    det->add_option("--threshold", da->threshold,
                    "Entropy threshold (default: fitted on fragments left out of the evaluation)");
    det->add_flag("--cusum-either", da->cusum_either, "Hedge: cusum passes when either direction passes");
    det->add_option("--out", da->out, "JSON report path (default stdout)");
    det->add_option("--jobs", da->jobs, "Worker threads");
    det->callback([da, &action] {
        action = [da] {
            corpus::require_size_class(da->size);
            const auto kind = eval::detector_from_string(da->which);
            const auto m = corpus::read_manifest(da->manifest);

            models::ClassDef other{"compressed", {}};
            if (da->targets.empty()) {
                for (auto l : corpus::kAllLabels)
                    if (l != corpus::CodecLabel::enc && m.count(l, da->size) > 0) other.members.push_back(l);
            } else {
                for (const auto& t : da->targets)
                    for (auto l : models::class_for(t).members)
                        if (l != corpus::CodecLabel::enc && m.count(l, da->size) > 0) other.members.push_back(l);
            }
            if (other.members.empty()) throw DataError("no non-encrypted fragments at the requested size");
            const std::vector<models::ClassDef> classes{models::class_for("enc"), other};
            const auto picked = models::select_balanced(m, classes, da->size, da->quota, da->seed);
            const auto fragments = read_labeled(m, picked);

            eval::DetectorContext ctx;
            ctx.suite.params.alpha = da->alpha;
            ctx.hedge.params.alpha = da->alpha;
            ctx.hedge.cusum_require_both = !da->cusum_either;
            corpus::Manifest rest = m;
            rest.entries = entries_not_in(m.entries, picked[0]);
            if (kind == eval::DetectorKind::chi_abs || kind == eval::DetectorKind::hedge) {
                ctx.calibration = load_or_calibrate(da->calibration, &rest, {da->size}, da->k);
                ctx.hedge.calibration = ctx.calibration;
            }
            if (kind == eval::DetectorKind::entropy_threshold) {
                if (da->threshold >= 0) {
                    ctx.entropy_threshold = da->threshold;
                } else {
                    std::vector<corpus::ManifestEntry> used = picked[0];
                    used.insert(used.end(), picked[1].begin(), picked[1].end());
                    rest.entries = entries_not_in(m.entries, used);
                    const auto dev_sel = models::select_balanced(rest, classes, da->size, da->quota, da->seed + 1);
                    ctx.entropy_threshold = eval::fit_entropy_threshold(read_labeled(rest, dev_sel));
                }
            }
            const auto metrics = eval::evaluate_detector(kind, fragments, ctx, eval::kBinaryLabels,
                                                         resolve_jobs(da->jobs));
            ordered_json report = {{"detector", eval::to_string(kind)}, {"size", da->size}};
            ordered_json members = ordered_json::array();
            for (auto l : other.members) members.push_back(corpus::to_string(l));
            report["non_encrypted_labels"] = members;
            if (kind == eval::DetectorKind::entropy_threshold) report["threshold"] = ctx.entropy_threshold;
            if (kind == eval::DetectorKind::chi_abs || kind == eval::DetectorKind::hedge) {
                const auto& mom = ctx.calibration.at(da->size);
                report["calibration"] = {{"mu", mom.mu}, {"sigma", mom.sigma}, {"k", da->k}};
            }
            const auto parsed = ordered_json::parse(metrics.to_json());
            for (auto& [k, v] : parsed.items()) report[k] = v;
            std::cout << eval::to_string(kind) << " accuracy: " << metrics.accuracy << " over "
                      << metrics.confusion.total() << " fragments\n";
            const std::string text = report.dump(2) + "\n";
            if (da->out.empty()) {
                std::cout << text;
                return;
            }
            const auto out = resolve_out(da->out);
            write_text(out, text);
            std::vector<fs::path> inputs{da->manifest};
            if (!da->calibration.empty()) inputs.emplace_back(da->calibration);
            write_provenance(out, "eval detector",
                             {{"which", da->which},
                              {"manifest", da->manifest},
                              {"size", da->size},
                              {"target", da->targets},
                              {"quota", da->quota},
                              {"seed", da->seed},
                              {"calibration", da->calibration},
                              {"k", da->k},
                              {"alpha", da->alpha},
                              {"threshold", da->threshold},
                              {"cusum_either", da->cusum_either}},
                             inputs);
        };
    });

    struct ProfileArgs {
        std::string manifest;
        std::string out;
        unsigned jobs = 0;
    };
    auto pa = std::make_shared<ProfileArgs>();
    auto* profile = ev->add_subcommand("entropy-profile", "Entropy percentiles per (label, size) as CSV");
    profile->add_option("--manifest", pa->manifest, "Corpus manifest")->required();
    profile->add_option("--out", pa->out, "CSV output path (default stdout)");
    profile->add_option("--jobs", pa->jobs, "Worker threads");
    profile->callback([pa, &action] {
        action = [pa] {
            const auto m = corpus::read_manifest(pa->manifest);
            const auto rows = eval::entropy_profile(m, resolve_jobs(pa->jobs));
            std::ostringstream csv;
            eval::write_entropy_profile_csv(csv, rows);
            if (pa->out.empty()) {
                std::cout << csv.str();
                return;
            }
            const auto out = resolve_out(pa->out);
            write_text(out, csv.str());
            write_provenance(out, "eval entropy-profile", {{"manifest", pa->manifest}}, {pa->manifest});
        };
    });

    struct BenchArgs {
        std::vector<std::string> bundles;
        std::string manifest;
        std::size_t count = 1000;
        std::size_t reps = 10;
        std::size_t warmup = 1;
        std::uint64_t seed = kDefaultSeed;
        std::vector<std::string> approaches{"nist_vote", "hedge"};
        std::string calibration;
        double k = 2.0;
        bool components = false;
        std::string out;
    };
    auto ba = std::make_shared<BenchArgs>();
    auto* bench = ev->add_subcommand("bench", "Per-sample detection time, single-threaded");
    bench->add_option("--bundle", ba->bundles, "Model bundle (repeatable; one per size, timed as one classifier)");
    bench->add_option("--manifest", ba->manifest, "Corpus manifest to draw fragments from")->required();
    bench->add_option("--count", ba->count, "Fragments drawn at random (>= 100)");
    bench->add_option("--reps", ba->reps, "Timed repetitions (>= 10)");
    bench->add_option("--warmup", ba->warmup, "Untimed warm-up passes");
    bench->add_option("--seed", ba->seed, "Sampling seed");
    bench->add_option("--approaches", ba->approaches, "Statistical detectors: entropy,chi_abs,chi_ci,nist_vote,hedge")
        ->delimiter(',');
    bench->add_option("--calibration", ba->calibration, "Chi-square calibration JSON (default: fitted on enc fragments)");
    bench->add_option("--k", ba->k, "Chi-square absolute window multiplier");
    bench->add_flag("--components", ba->components, "Also time each hedge component on its own");
    bench->add_option("--out", ba->out, "CSV output path (default stdout)");
    bench->callback([ba, &action] {
        action = [ba] {
            const auto m = corpus::read_manifest(ba->manifest);

            // Classifiers grouped by kind; each kind dispatches on fragment size.
            std::vector<models::ModelBundle> bundles;
            for (const auto& p : ba->bundles) bundles.push_back(models::load_bundle(p));
            std::map<std::string, std::map<std::size_t, const models::ModelBundle*>> by_kind;
            for (const auto& b : bundles) {
                const std::string name =
                    b.kind == models::BundleKind::binary ? "classifier" : std::string(models::to_string(b.kind));
                if (!by_kind[name].emplace(b.size_class, &b).second)
                    throw ArgumentError("two " + name + " bundles for size " + std::to_string(b.size_class));
            }

            std::set<std::size_t> sizes;
            if (by_kind.empty()) {
                for (const auto& e : m.entries) sizes.insert(e.size);
            } else {
                sizes = {};
                bool first = true;
                for (const auto& [name, per_size] : by_kind) {
                    std::set<std::size_t> s;
                    for (const auto& kv : per_size) s.insert(kv.first);
                    if (first) sizes = s;
                    else {
                        std::set<std::size_t> both;
                        std::set_intersection(sizes.begin(), sizes.end(), s.begin(), s.end(),
                                              std::inserter(both, both.begin()));
                        sizes = both;
                    }
                    first = false;
                }
            }
            std::vector<corpus::ManifestEntry> pool;
            for (const auto& e : m.entries)
                if (sizes.count(e.size)) pool.push_back(e);
            if (pool.size() < ba->count) throw DataError("manifest has fewer fragments than --count");
            std::mt19937_64 rng(ba->seed);
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(ba->count);
            corpus::FragmentReader reader(m.base_dir);
            std::vector<std::vector<std::uint8_t>> fragments;
            for (const auto& e : pool) fragments.push_back(reader.read(e));

            eval::DetectorContext ctx;
            bool need_cal = ba->components;
            for (const auto& a : ba->approaches) {
                const auto kind = eval::detector_from_string(a);
                need_cal |= kind == eval::DetectorKind::chi_abs || kind == eval::DetectorKind::hedge;
            }
            if (need_cal) {
                ctx.calibration = load_or_calibrate(ba->calibration, &m, {sizes.begin(), sizes.end()}, ba->k);
                ctx.hedge.calibration = ctx.calibration;
            }

            std::vector<eval::BenchTarget> targets;
            for (const auto& a : ba->approaches) {
                const auto kind = eval::detector_from_string(a);
                targets.push_back({std::string(eval::to_string(kind)), [kind, &ctx](std::span<const std::uint8_t> f) {
                                       return eval::detector_says_random(kind, f, ctx) ? 1 : 0;
                                   }});
            }
            if (ba->components) {
                const auto& params = ctx.hedge.params;
                const bool both = ctx.hedge.cusum_require_both;
                targets.push_back({"hedge:chi_abs", [&ctx](std::span<const std::uint8_t> f) {
                                       return randomness::chi_abs_test(f, ctx.calibration).passed ? 1 : 0;
                                   }});
                targets.push_back({"hedge:chi_ci", [](std::span<const std::uint8_t> f) {
                                       return randomness::chi_ci_test(f).passed ? 1 : 0;
                                   }});
                targets.push_back({"hedge:block_frequency", [params](std::span<const std::uint8_t> f) {
                                       const auto bits = randomness::BitSequence::from_bytes(f);
                                       return randomness::nist_block_frequency(bits, params.block_frequency_m,
                                                                               params.alpha)
                                                      .passed
                                                  ? 1
                                                  : 0;
                                   }});
                targets.push_back({"hedge:cusum", [params, both](std::span<const std::uint8_t> f) {
                                       const auto bits = randomness::BitSequence::from_bytes(f);
                                       return randomness::nist_cusum_combined(bits, params.alpha, both).passed ? 1 : 0;
                                   }});
                targets.push_back({"hedge:approx_entropy", [params](std::span<const std::uint8_t> f) {
                                       const auto bits = randomness::BitSequence::from_bytes(f);
                                       return randomness::nist_approx_entropy(bits, params.approx_entropy_m,
                                                                              params.alpha)
                                                      .passed
                                                  ? 1
                                                  : 0;
                                   }});
            }
            // One Classifier per (kind, size), reused across samples like a deployed detector.
            std::vector<std::shared_ptr<std::map<std::size_t, models::Classifier>>> classifiers;
            for (const auto& [name, per_size] : by_kind) {
                auto cls = std::make_shared<std::map<std::size_t, models::Classifier>>();
                for (const auto& [size, b] : per_size) cls->emplace(size, models::Classifier(*b));
                classifiers.push_back(cls);
                targets.push_back({name, [cls](std::span<const std::uint8_t> f) {
                                       return static_cast<int>(cls->at(f.size()).classify_index(f));
                                   }});
            }

            eval::BenchmarkOptions opts;
            opts.repetitions = ba->reps;
            opts.warmup_passes = ba->warmup;
            const auto report = eval::benchmark(targets, fragments, opts);
            std::ostringstream csv;
            report.write_csv(csv);
            if (ba->out.empty()) {
                std::cout << csv.str();
                return;
            }
            const auto out = resolve_out(ba->out);
            write_text(out, csv.str());
            std::vector<fs::path> inputs{ba->manifest};
            for (const auto& b : ba->bundles) inputs.emplace_back(b);
            if (!ba->calibration.empty()) inputs.emplace_back(ba->calibration);
            write_provenance(out, "eval bench",
                             {{"bundles", ba->bundles},
                              {"manifest", ba->manifest},
                              {"count", ba->count},
                              {"reps", ba->reps},
                              {"warmup", ba->warmup},
                              {"seed", ba->seed},
                              {"approaches", ba->approaches},
                              {"calibration", ba->calibration},
                              {"k", ba->k},
                              {"components", ba->components}},
                             inputs);
        };
    });
}

}  // namespace encod::cli
