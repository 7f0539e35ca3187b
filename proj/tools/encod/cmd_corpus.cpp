#include <algorithm>
#include <iostream>
#include <sstream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "encod/corpus/builder.hpp"
#include "encod/features/feature_csv.hpp"
#include "encod/models/training.hpp"

namespace encod::cli {
namespace {

std::vector<std::string> all_sizes() {
    std::vector<std::string> out;
    for (auto s : corpus::kSizeClasses) out.push_back(std::to_string(s));
    return out;
}

void report(const corpus::Manifest& m) {
    std::cout << "manifest: " << m.entries.size() << " fragments, balanced=" << (m.balanced ? "true" : "false")
              << "\n";
    for (const auto& n : m.notes) std::cout << "note: " << n << "\n";
}

}  // namespace

void register_corpus(CLI::App& app, Action& action) {
    auto* corpus_cmd = app.add_subcommand("corpus", "Build or extend a labeled fragment corpus");
    corpus_cmd->require_subcommand(1);

    struct BuildArgs {
        std::vector<std::string> src;
        std::vector<std::string> codecs{"enc", "zip", "gzip", "bz2", "xz", "rar"};
        std::vector<std::string> sizes = all_sizes();
        std::size_t quota = 1000;
        std::uint64_t seed = kDefaultSeed;
        std::string out;
        std::string mode = "reference";
        bool keep_high_entropy = false;
        unsigned jobs = 0;
    };
    auto b = std::make_shared<BuildArgs>();
    auto* build = corpus_cmd->add_subcommand("build", "Compress/encrypt source files and sample fragments");
    build->add_option("--src", b->src, "Source directory of plaintext files (repeatable)")->required();
    build->add_option("--codecs", b->codecs, "Transform codecs: enc,zip,gzip,bz2,xz,rar")->delimiter(',');
    build->add_option("--sizes", b->sizes, "Fragment sizes in bytes")->delimiter(',');
    build->add_option("--quota", b->quota, "Fragments per (label, size)");
    build->add_option("--seed", b->seed, "Corpus seed");
    build->add_option("--out", b->out, "Output directory (manifest.jsonl is merged there)")->required();
    build->add_option("--mode", b->mode, "Fragment storage: reference or inline");
    build->add_flag("--keep-high-entropy", b->keep_high_entropy, "Do not skip sources that already look compressed");
    build->add_option("--jobs", b->jobs, "Worker threads (default $ENCOD_JOBS or 1)");
    build->callback([b, &action] {
        action = [b] {
            corpus::BuildOptions o;
            for (const auto& s : b->src) o.source_dirs.emplace_back(s);
            o.codecs = parse_labels(b->codecs);
            o.sizes = parse_sizes(b->sizes);
            o.quota = b->quota;
            o.seed = b->seed;
            o.out_dir = resolve_out(b->out);
            o.mode = corpus::storage_mode_from_string(b->mode);
            o.skip_high_entropy_sources = !b->keep_high_entropy;
            o.jobs = resolve_jobs(b->jobs);
            const auto m = corpus::build_corpus(o);
            report(m);
            write_provenance(o.out_dir, "corpus build",
                             {{"src", b->src}, {"codecs", b->codecs}, {"sizes", o.sizes}, {"quota", o.quota},
                              {"seed", o.seed}, {"mode", b->mode}, {"keep_high_entropy", b->keep_high_entropy}},
                             {});
        };
    });

    struct IngestArgs {
        std::string dir;
        std::string label;
        std::vector<std::string> sizes = all_sizes();
        std::size_t quota = 1000;
        std::uint64_t seed = kDefaultSeed;
        std::string out;
        std::string mode = "reference";
    };
    auto g = std::make_shared<IngestArgs>();
    auto* ingest = corpus_cmd->add_subcommand("ingest", "Fragment existing media files as-is");
    ingest->add_option("--dir", g->dir, "Directory of media files")->required();
    ingest->add_option("--label", g->label, "Media label: png, jpeg, mp3, pdf, office, h264, ...")->required();
    ingest->add_option("--sizes", g->sizes, "Fragment sizes in bytes")->delimiter(',');
    ingest->add_option("--quota", g->quota, "Fragments per size");
    ingest->add_option("--seed", g->seed, "Sampling seed");
    ingest->add_option("--out", g->out, "Corpus directory (manifest.jsonl is merged there)")->required();
    ingest->add_option("--mode", g->mode, "Fragment storage: reference or inline");
    ingest->callback([g, &action] {
        action = [g] {
            corpus::IngestOptions o;
            o.dir = g->dir;
            o.label = corpus::label_from_string(g->label);
            o.sizes = parse_sizes(g->sizes);
            o.quota = g->quota;
            o.seed = g->seed;
            o.out_dir = resolve_out(g->out);
            o.mode = corpus::storage_mode_from_string(g->mode);
            const auto m = corpus::ingest_into(o);
            report(m);
            write_provenance(o.out_dir, "corpus ingest",
                             {{"dir", g->dir}, {"label", g->label}, {"sizes", o.sizes}, {"quota", o.quota},
                              {"seed", o.seed}, {"mode", g->mode}},
                             {}, g->label);
        };
    });

    auto* verify = corpus_cmd->add_subcommand("verify", "Re-hash every fragment of a manifest");
    auto manifest_path = std::make_shared<std::string>();
    verify->add_option("--manifest", *manifest_path, "Manifest file")->required();
    verify->callback([manifest_path, &action] {
        action = [manifest_path] {
            const auto m = corpus::read_manifest(*manifest_path);
            const auto bad = corpus::verify_manifest(m);
            std::cout << m.entries.size() - bad.size() << " of " << m.entries.size() << " fragments verified\n";
            for (const auto& e : bad) std::cout << "mismatch: " << e.path << " @" << e.offset << "\n";
            if (!bad.empty()) throw DataError(std::to_string(bad.size()) + " fragments failed verification");
        };
    });
}

void register_features(CLI::App& app, Action& action) {
    auto* features_cmd = app.add_subcommand("features", "Feature extraction");
    features_cmd->require_subcommand(1);
    struct DumpArgs {
        std::string manifest;
        std::vector<std::string> sizes;
        std::vector<std::string> labels;
        std::string out;
        unsigned jobs = 0;
    };
    auto d = std::make_shared<DumpArgs>();
    auto* dump = features_cmd->add_subcommand("dump", "Write byte histograms as CSV (f0..f255,label,size)");
    dump->add_option("--manifest", d->manifest, "Manifest file")->required();
    dump->add_option("--sizes", d->sizes, "Only these fragment sizes")->delimiter(',');
    dump->add_option("--labels", d->labels, "Only these labels")->delimiter(',');
    dump->add_option("--out", d->out, "CSV output path (default stdout)");
    dump->add_option("--jobs", d->jobs, "Worker threads");
    dump->callback([d, &action] {
        action = [d] {
            const auto m = corpus::read_manifest(d->manifest);
            const auto sizes = parse_sizes(d->sizes);
            const auto labels = parse_labels(d->labels);
            std::vector<corpus::ManifestEntry> picked;
            for (const auto& e : m.entries) {
                if (!sizes.empty() && std::find(sizes.begin(), sizes.end(), e.size) == sizes.end()) continue;
                if (!labels.empty() && std::find(labels.begin(), labels.end(), e.label) == labels.end()) continue;
                picked.push_back(e);
            }
            const auto vecs = models::load_features(m, picked, resolve_jobs(d->jobs));
            std::ostringstream csv;
            features::write_feature_csv_header(csv);
            for (std::size_t i = 0; i < picked.size(); ++i)
                features::write_feature_csv_row(csv, vecs[i], std::string(corpus::to_string(picked[i].label)),
                                                picked[i].size);
            if (d->out.empty()) {
                std::cout << csv.str();
                return;
            }
            const auto out = resolve_out(d->out);
            write_text(out, csv.str());
            write_provenance(out, "features dump", {{"manifest", d->manifest}, {"sizes", sizes}, {"labels", d->labels}},
                             {d->manifest});
        };
    });
}

}  // namespace encod::cli
