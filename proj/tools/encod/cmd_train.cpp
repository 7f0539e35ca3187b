#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "encod/error.hpp"
#include "encod/models/training.hpp"

namespace encod::cli {
namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::string manifest;
    std::size_t size = 2048;
    std::uint64_t seed = kDefaultSeed;
    std::size_t quota = 20000;
    std::string out;
    std::size_t epochs = 100;
    std::size_t patience = 5;
    double lr = 1e-3;
    std::size_t batch = 0;
    std::vector<double> split{0.85, 0.05, 0.10};
    bool verbose = false;
    unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--manifest", a.manifest, "Corpus manifest")->required();
    cmd->add_option("--size", a.size, "Fragment size class");
    cmd->add_option("--seed", a.seed, "Seed for selection, split, init and shuffling");
    cmd->add_option("--quota", a.quota, "Max fragments per class (classes are downsampled to the smallest)");
    cmd->add_option("--out", a.out, "Bundle output path; the test split is written to <out>.test.jsonl")->required();
    cmd->add_option("--epochs", a.epochs, "Max training epochs");
    cmd->add_option("--patience", a.patience, "Early stopping patience in epochs (0 disables)");
    cmd->add_option("--lr", a.lr, "Adam learning rate");
    cmd->add_option("--batch", a.batch, "Batch size (0 = architecture default)");
    cmd->add_option("--split", a.split, "Train,dev,test ratios")->delimiter(',')->expected(3);
    cmd->add_flag("--verbose,-v", a.verbose, "Print per-epoch losses to stderr");
    cmd->add_option("--jobs", a.jobs, "Worker threads for feature loading");
}

models::TrainOptions options_from(const CommonArgs& a) {
    models::TrainOptions o;
    o.quota = a.quota;
    o.seed = a.seed;
    o.max_epochs = a.epochs;
    o.patience = a.patience;
    o.learning_rate = a.lr;
    o.batch_size = a.batch;
    o.split.train = a.split.at(0);
    o.split.dev = a.split.at(1);
    o.split.test = a.split.at(2);
    o.jobs = resolve_jobs(a.jobs);
    if (a.verbose)
        o.on_epoch = [](std::size_t epoch, double train, double dev) {
            std::fprintf(stderr, "epoch %zu train %.6f dev %.6f\n", epoch + 1, train, dev);
        };
    return o;
}

nlohmann::ordered_json common_config(const CommonArgs& a) {
    return {{"manifest", a.manifest}, {"size", a.size},         {"seed", a.seed},         {"quota", a.quota},
            {"epochs", a.epochs},     {"patience", a.patience}, {"lr", a.lr},             {"batch", a.batch},
            {"split", a.split}};
}

// Writes the bundle, its held-out test manifest and the provenance record.
void finish(const models::TrainingResult& r, const corpus::Manifest& manifest, const CommonArgs& a,
            const std::string& command, nlohmann::ordered_json config) {
    const auto out = resolve_out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    models::save_bundle(r.bundle, out);

    corpus::Manifest test = manifest;
    test.entries = r.split.test;
    test.notes.push_back("held-out test split of " + fs::absolute(a.manifest).generic_string());
    test = rebase_manifest(test, out.has_parent_path() ? out.parent_path() : fs::path("."));
    test.sort_entries();
    const fs::path test_path = out.string() + ".test.jsonl";
    corpus::write_manifest(test, test_path);

    std::cout << "bundle: " << out.generic_string() << " (" << models::bundle_digest(r.bundle) << ")\n";
    std::cout << "classes:";
    for (const auto& c : r.bundle.classes) std::cout << " " << c.name;
    std::cout << "\nsamples: train " << r.split.train.size() << ", dev " << r.split.dev.size() << ", test "
              << r.split.test.size() << "\n";
    std::cout << "epochs: " << r.history.train.size() << " (best " << r.history.best_epoch + 1 << ")\n";
    std::cout << "test accuracy: " << r.test_metrics.accuracy << "\n";

    config["test_manifest"] = test_path.generic_string();
    write_provenance(out, command, config, {a.manifest});
}

}  // namespace

void register_train(CLI::App& app, Action& action) {
    auto* train = app.add_subcommand("train", "Train classifiers into model bundles");
    train->require_subcommand(1);

    struct BinaryArgs : CommonArgs {
        std::string label;
        bool swap = false;
    };
    auto b = std::make_shared<BinaryArgs>();
    auto* binary = train->add_subcommand("binary", "Encrypted vs one label (or macro: cmp, video)");
    add_common(binary, *b);
    binary->add_option("--label", b->label, "Non-encrypted class: a base label or macro")->required();
    binary->add_flag("--swap-labels", b->swap, "Put the target class before enc in the label map");
    binary->callback([b, &action] {
        action = [b] {
            const auto m = corpus::read_manifest(b->manifest);
            auto o = options_from(*b);
            o.swap_labels = b->swap;
            const auto r = models::train_binary(m, b->label, b->size, o);
            auto config = common_config(*b);
            config["label"] = b->label;
            config["swap_labels"] = b->swap;
            finish(r, m, *b, "train binary", config);
        };
    });

    struct MultiArgs : CommonArgs {
        std::vector<std::string> labels;
        bool full = false;
    };
    auto mc = std::make_shared<MultiArgs>();
    auto* multi = train->add_subcommand("multiclass", "One class per label or macro");
    add_common(multi, *mc);
    multi->add_option("--labels", mc->labels, "Classes (default enc,cmp,png,jpeg,mp3,pdf,office,video)")
        ->delimiter(',');
    multi->add_flag("--full", mc->full, "All sixteen base labels as separate classes");
    multi->callback([mc, &action] {
        action = [mc] {
            if (mc->full && !mc->labels.empty()) throw ArgumentError("--full and --labels are exclusive");
            const auto labels = mc->full                ? models::full_multiclass_labels()
                                : mc->labels.empty()    ? models::default_multiclass_labels()
                                                        : mc->labels;
            const auto m = corpus::read_manifest(mc->manifest);
            const auto r = models::train_multiclass(m, labels, mc->size, options_from(*mc));
            auto config = common_config(*mc);
            config["labels"] = labels;
            finish(r, m, *mc, "train multiclass", config);
        };
    });

    struct AeArgs : CommonArgs {
        std::string variant = "ae1";
        std::string label;
        std::size_t ae_quota = 2000;
        std::size_t ae_epochs = 25;
        double ae_lr = 1e-3;
    };
    auto ae = std::make_shared<AeArgs>();
    auto* aecmd = train->add_subcommand("ae", "Autoencoder features + binary head (encoder frozen)");
    add_common(aecmd, *ae);
    aecmd->add_option("--variant", ae->variant, "Autoencoder: ae1 or ae2");
    aecmd->add_option("--label", ae->label, "Non-encrypted class of the head: base label or macro")->required();
    aecmd->add_option("--ae-quota", ae->ae_quota, "Fragments per base label for fitting the autoencoder");
    aecmd->add_option("--ae-epochs", ae->ae_epochs, "Autoencoder epochs");
    aecmd->add_option("--ae-lr", ae->ae_lr, "Autoencoder learning rate");
    aecmd->callback([ae, &action] {
        action = [ae] {
            const auto m = corpus::read_manifest(ae->manifest);
            models::AutoencoderOptions ao;
            ao.quota_per_label = ae->ae_quota;
            ao.seed = ae->seed;
            ao.epochs = ae->ae_epochs;
            ao.learning_rate = ae->ae_lr;
            ao.jobs = resolve_jobs(ae->jobs);
            if (ae->verbose)
                ao.on_epoch = [](std::size_t epoch, double train, double dev) {
                    std::fprintf(stderr, "ae epoch %zu train %.6f dev %.6f\n", epoch + 1, train, dev);
                };
            const auto model =
                models::train_autoencoder(m, models::autoencoder_variant_from_string(ae->variant), ae->size, ao);
            std::cout << "autoencoder dev loss: " << model.untrained_dev_loss << " -> " << model.trained_dev_loss
                      << "\n";
            const auto r = models::train_ae_classifier(m, model, ae->label, ae->size, options_from(*ae));
            auto config = common_config(*ae);
            config["variant"] = ae->variant;
            config["label"] = ae->label;
            config["ae_quota"] = ae->ae_quota;
            config["ae_epochs"] = ae->ae_epochs;
            config["ae_lr"] = ae->ae_lr;
            config["ae_dev_loss"] = {{"untrained", model.untrained_dev_loss}, {"trained", model.trained_dev_loss}};
            finish(r, m, *ae, "train ae", config);
        };
    });
}

}  // namespace encod::cli
