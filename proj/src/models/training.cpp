#include "encod/models/training.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "encod/error.hpp"
#include "encod/features/scaler.hpp"
#include "encod/models/inference.hpp"
#include "encod/util/digest.hpp"
#include "encod/util/parallel.hpp"

namespace encod::models {
namespace {

using corpus::CodecLabel;
using corpus::ManifestEntry;
using nn::Tensor;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (salt + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Splits `cap` across groups as evenly as their availability allows.
std::vector<std::size_t> even_allocation(const std::vector<std::size_t>& available, std::size_t cap) {
    std::vector<std::size_t> idx(available.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return available[a] < available[b]; });
    std::vector<std::size_t> take(available.size(), 0);
    std::size_t remaining = cap;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const std::size_t share = remaining / (idx.size() - k);
        take[idx[k]] = std::min(available[idx[k]], share);
        remaining -= take[idx[k]];
    }
    // Hand out the rounding remainder to groups that still have material.
    for (std::size_t k = 0; k < idx.size() && remaining > 0; ++k)
        if (take[idx[k]] < available[idx[k]]) {
            const std::size_t extra = std::min(remaining, available[idx[k]] - take[idx[k]]);
            take[idx[k]] += extra;
            remaining -= extra;
        }
    return take;
}

struct Dataset {
    Tensor<float> x;
    Tensor<float> y;
    std::vector<std::size_t> truth;
};

std::vector<ClassDef> resolve_classes(const std::vector<std::string>& names) {
    std::vector<ClassDef> out;
    for (const auto& n : names) out.push_back(class_for(n));
    return out;
}

std::map<CodecLabel, std::size_t> class_lookup(const std::vector<ClassDef>& classes) {
    std::map<CodecLabel, std::size_t> m;
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (auto l : classes[i].members) {
            if (m.count(l)) throw ArgumentError("label '" + std::string(corpus::to_string(l)) + "' is in two classes");
            m[l] = i;
        }
    return m;
}

Dataset make_dataset(const std::vector<features::FeatureVector>& vectors, const std::vector<ManifestEntry>& entries,
                     const features::ScalerParams& scaler, const std::map<CodecLabel, std::size_t>& lookup,
                     std::size_t classes) {
    Dataset d;
    const auto n = static_cast<Eigen::Index>(vectors.size());
    d.x.resize(n, static_cast<Eigen::Index>(features::kFeatureWidth));
    d.y = Tensor<float>::Zero(n, static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        features::apply_scaler(vectors[k], scaler, std::span<float>(d.x.row(i).data(), features::kFeatureWidth));
        const std::size_t c = lookup.at(entries[k].label);
        d.y(i, static_cast<Eigen::Index>(c)) = 1.0f;
        d.truth.push_back(c);
    }
    return d;
}

std::vector<std::size_t> argmax_rows(const Tensor<float>& p) {
    std::vector<std::size_t> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Eigen::Index arg = 0;
        p.row(i).maxCoeff(&arg);
        out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(arg);
    }
    return out;
}

nn::NetworkSpec apply_options(nn::NetworkSpec spec, const TrainOptions& o) {
    spec.epochs = o.max_epochs;
    spec.patience = o.patience;
    spec.learning_rate = o.learning_rate;
    if (o.batch_size > 0) spec.batch_size = o.batch_size;
    return spec;
}

nn::TrainConfig train_config(const nn::NetworkSpec& spec, std::uint64_t seed) {
    nn::TrainConfig c;
    c.batch_size = spec.batch_size;
    c.max_epochs = spec.epochs;
    c.patience = spec.patience;
    c.learning_rate = spec.learning_rate;
    c.seed = seed;
    c.loss = spec.loss;
    return c;
}

nn::NetworkSpec prefix_spec(const nn::NetworkSpec& full, std::size_t layers) {
    nn::NetworkSpec s = full;
    s.dims.assign(full.dims.begin(), full.dims.begin() + static_cast<std::ptrdiff_t>(layers + 1));
    s.activations.assign(full.activations.begin(), full.activations.begin() + static_cast<std::ptrdiff_t>(layers));
    return s;
}

struct PreparedData {
    std::vector<ClassDef> classes;
    std::vector<ManifestEntry> selected;
    eval::DatasetSplit split;
    std::vector<features::FeatureVector> train, dev, test;
};

PreparedData prepare(const corpus::Manifest& manifest, std::vector<ClassDef> classes, std::size_t size_class,
                     const TrainOptions& options) {
    corpus::require_size_class(size_class);
    PreparedData p;
    const auto per_class = select_balanced(manifest, classes, size_class, options.quota, options.seed);
    for (const auto& c : per_class) p.selected.insert(p.selected.end(), c.begin(), c.end());
    eval::SplitSpec split = options.split;
    split.seed = options.seed;
    p.split = eval::split_dataset(p.selected, split);
    p.train = load_features(manifest, p.split.train, options.jobs);
    p.dev = load_features(manifest, p.split.dev, options.jobs);
    p.test = load_features(manifest, p.split.test, options.jobs);
    p.classes = std::move(classes);
    return p;
}

/// Trains a classifier whose input is `transform(scaled features)`; the bundle
/// chains `prefix` networks before the trained one.
TrainingResult fit_classifier(PreparedData data, BundleKind kind, nn::NetworkSpec spec, const TrainOptions& options,
                              std::size_t size_class, const features::ScalerParams& scaler,
                              std::vector<NamedNetwork> prefix, const std::string& name) {
    const auto lookup = class_lookup(data.classes);
    Dataset train = make_dataset(data.train, data.split.train, scaler, lookup, data.classes.size());
    Dataset dev = make_dataset(data.dev, data.split.dev, scaler, lookup, data.classes.size());
    Dataset test = make_dataset(data.test, data.split.test, scaler, lookup, data.classes.size());
    for (const auto& pre : prefix) {
        train.x = pre.net.predict(train.x);
        if (dev.x.rows() > 0) dev.x = pre.net.predict(dev.x);
        if (test.x.rows() > 0) test.x = pre.net.predict(test.x);
    }

    auto net = nn::Network<float>::build(spec);
    TrainingResult result;
    result.history = nn::train(net, train.x, train.y, &dev.x, &dev.y, train_config(spec, options.seed), options.on_epoch);

    ModelBundle& b = result.bundle;
    b.kind = kind;
    b.networks = std::move(prefix);
    b.networks.push_back(NamedNetwork{name, spec, std::move(net)});
    b.scaler = scaler;
    b.classes = data.classes;
    b.size_class = size_class;
    b.fingerprint = Fingerprint{options.seed, corpus_digest(data.selected)};

    if (test.x.rows() > 0) {
        const auto& head = b.networks.back().net;
        const auto predicted = argmax_rows(head.predict(test.x));
        result.test_metrics = eval::compute_metrics(b.label_map(), test.truth, predicted);
        b.metrics_json = result.test_metrics.to_json();
    }
    b.validate();
    result.split = std::move(data.split);
    return result;
}

std::vector<ClassDef> binary_classes(const std::string& target, bool swap) {
    if (target == "enc") throw ArgumentError("binary target must differ from enc");
    ClassDef enc = class_for("enc");
    ClassDef other = class_for(target);
    return swap ? std::vector<ClassDef>{other, enc} : std::vector<ClassDef>{enc, other};
}

}  // namespace

std::vector<std::vector<ManifestEntry>> select_balanced(const corpus::Manifest& manifest,
                                                        const std::vector<ClassDef>& classes, std::size_t size_class,
                                                        std::size_t quota, std::uint64_t seed) {
    if (classes.empty()) throw ArgumentError("no classes requested");
    if (quota == 0) throw ArgumentError("quota must be positive");
    std::map<CodecLabel, std::vector<ManifestEntry>> by_label;
    for (const auto& e : manifest.entries)
        if (e.size == size_class) by_label[e.label].push_back(e);

    std::vector<std::vector<std::size_t>> available(classes.size());
    std::size_t smallest = quota;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::size_t total = 0;
        for (auto m : classes[c].members) {
            const auto it = by_label.find(m);
            available[c].push_back(it == by_label.end() ? 0 : it->second.size());
            total += available[c].back();
        }
        if (total == 0)
            throw DataError("no fragments of class '" + classes[c].name + "' at size " + std::to_string(size_class));
        smallest = std::min(smallest, total);
    }

    std::vector<std::vector<ManifestEntry>> out(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto take = even_allocation(available[c], smallest);
        for (std::size_t k = 0; k < classes[c].members.size(); ++k) {
            if (take[k] == 0) continue;
            const CodecLabel label = classes[c].members[k];
            std::vector<ManifestEntry> pool = by_label[label];
            std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(label) * 131 + size_class));
            for (std::size_t i = 0; i < take[k]; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
                std::swap(pool[i], pool[pick(rng)]);
            }
            out[c].insert(out[c].end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take[k]));
        }
    }
    return out;
}

std::vector<features::FeatureVector> load_features(const corpus::Manifest& manifest,
                                                   const std::vector<ManifestEntry>& entries, unsigned jobs) {
    std::vector<features::FeatureVector> out(entries.size());
    const std::size_t chunks = std::max(1u, jobs);
    util::parallel_for(chunks, jobs, [&](std::size_t chunk) {
        corpus::FragmentReader reader(manifest.base_dir);
        util::Bytes buf;
        const std::size_t begin = entries.size() * chunk / chunks;
        const std::size_t end = entries.size() * (chunk + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            reader.read_into(entries[i], buf);
            out[i] = features::byte_histogram(buf);
        }
    });
    return out;
}

TrainingResult train_binary(const corpus::Manifest& manifest, const std::string& target, std::size_t size_class,
                            const TrainOptions& options) {
    auto data = prepare(manifest, binary_classes(target, options.swap_labels), size_class, options);
    const auto scaler = features::fit_scaler(data.train);
    const auto spec = apply_options(build_binary(size_class, options.seed), options);
    return fit_classifier(std::move(data), BundleKind::binary, spec, options, size_class, scaler, {}, "classifier");
}

std::vector<std::string> default_multiclass_labels() {
    return {"enc", "cmp", "png", "jpeg", "mp3", "pdf", "office", "video"};
}

std::vector<std::string> full_multiclass_labels() {
    std::vector<std::string> out;
    for (auto l : corpus::kAllLabels) out.emplace_back(corpus::to_string(l));
    return out;
}

TrainingResult train_multiclass(const corpus::Manifest& manifest, const std::vector<std::string>& labels,
                                std::size_t size_class, const TrainOptions& options) {
    auto classes = resolve_classes(labels);
    // Drop macro members with no material (rar without an encoder, say).
    for (auto& c : classes) {
        if (c.members.size() < 2) continue;
        std::erase_if(c.members, [&](CodecLabel l) { return manifest.count(l, size_class) == 0; });
        if (c.members.empty())
            throw DataError("no fragments of class '" + c.name + "' at size " + std::to_string(size_class));
    }
    auto data = prepare(manifest, classes, size_class, options);
    const auto scaler = features::fit_scaler(data.train);
    const auto spec = apply_options(build_multiclass(classes.size(), options.seed), options);
    return fit_classifier(std::move(data), BundleKind::multiclass, spec, options, size_class, scaler, {},
                          "classifier");
}

AutoencoderModel train_autoencoder(const corpus::Manifest& manifest, AutoencoderVariant variant,
                                   std::size_t size_class, const AutoencoderOptions& options) {
    corpus::require_size_class(size_class);
    std::vector<ManifestEntry> selected;
    for (auto label : corpus::kAllLabels) {
        if (manifest.count(label, size_class) == 0) continue;
        const auto picked = select_balanced(manifest, {ClassDef{std::string(corpus::to_string(label)), {label}}},
                                            size_class, options.quota_per_label, options.seed);
        selected.insert(selected.end(), picked[0].begin(), picked[0].end());
    }
    if (selected.empty()) throw DataError("no fragments at size " + std::to_string(size_class) + " for the autoencoder");

    eval::SplitSpec split{0.9, 0.1, 0.0, options.seed, true};
    const auto parts = eval::split_dataset(selected, split);
    const auto train_vecs = load_features(manifest, parts.train, options.jobs);
    const auto dev_vecs = load_features(manifest, parts.dev, options.jobs);

    AutoencoderModel model;
    model.spec = build_autoencoder(variant, options.seed);
    model.spec.autoencoder.epochs = options.epochs;
    model.spec.autoencoder.learning_rate = options.learning_rate;
    model.size_class = size_class;
    model.scaler = features::fit_scaler(train_vecs);

    auto to_tensor = [&](const std::vector<features::FeatureVector>& vecs) {
        Tensor<float> x(static_cast<Eigen::Index>(vecs.size()), static_cast<Eigen::Index>(features::kFeatureWidth));
        for (std::size_t i = 0; i < vecs.size(); ++i)
            features::apply_scaler(vecs[i], model.scaler,
                                   std::span<float>(x.row(static_cast<Eigen::Index>(i)).data(), features::kFeatureWidth));
        return x;
    };
    const Tensor<float> x = to_tensor(train_vecs);
    const Tensor<float> dev = to_tensor(dev_vecs);

    model.network = nn::Network<float>::build(model.spec.autoencoder);
    const auto& ae = model.spec.autoencoder;
    model.untrained_dev_loss = nn::evaluate_loss(model.network, dev, dev, ae.loss);
    model.history = nn::train(model.network, x, x, &dev, &dev, train_config(ae, options.seed), options.on_epoch);
    model.trained_dev_loss = nn::evaluate_loss(model.network, dev, dev, ae.loss);
    return model;
}

TrainingResult train_ae_classifier(const corpus::Manifest& manifest, const AutoencoderModel& autoencoder,
                                   const std::string& target, std::size_t size_class, const TrainOptions& options) {
    if (autoencoder.size_class != size_class)
        throw ArgumentError("autoencoder was trained for size " + std::to_string(autoencoder.size_class) +
                            ", not " + std::to_string(size_class));
    auto data = prepare(manifest, binary_classes(target, options.swap_labels), size_class, options);
    const auto encoder_spec = prefix_spec(autoencoder.spec.autoencoder, autoencoder.spec.encoder_layers);
    std::vector<NamedNetwork> prefix{NamedNetwork{"encoder", encoder_spec, autoencoder.encoder()}};
    const auto head_spec = apply_options(autoencoder.spec.head, options);
    return fit_classifier(std::move(data), BundleKind::ae_classifier, head_spec, options, size_class,
                          autoencoder.scaler, std::move(prefix), "head");
}

std::string corpus_digest(const std::vector<ManifestEntry>& entries) {
    std::string text;
    text.reserve(entries.size() * 100);
    for (const auto& e : entries) {
        text += e.path;
        text += '\t';
        text += std::to_string(e.offset);
        text += '\t';
        text += std::to_string(e.size);
        text += '\t';
        text += corpus::to_string(e.label);
        text += '\t';
        text += e.sha256;
        text += '\n';
    }
    return util::sha256_hex(text);
}

}  // namespace encod::models
