#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "encod/error.hpp"
#include "encod/models/inference.hpp"

namespace encod::cli {

void register_classify(CLI::App& app, Action& action) {
    struct Args {
        std::string bundle;
        std::string input = "-";
    };
    auto a = std::make_shared<Args>();
    auto* cmd = app.add_subcommand(
        "classify", "Fragment a file (or stdin) at the bundle's size and print one JSON line per fragment");
    cmd->add_option("--bundle", a->bundle, "Model bundle")->required();
    cmd->add_option("input", a->input, "Input file, or '-' for stdin");
    cmd->callback([a, &action] {
        action = [a] {
            const auto bundle = models::load_bundle(a->bundle);
            util::Bytes data;
            if (a->input == "-") {
                std::ostringstream ss;
                ss << std::cin.rdbuf();
                const std::string s = ss.str();
                data.assign(s.begin(), s.end());
            } else {
                data = util::read_file(a->input);
            }
            const std::size_t size = bundle.size_class;
            if (data.size() < size) throw DataError("input smaller than fragment size");
            models::Classifier classifier(bundle);
            std::string out;
            for (std::size_t off = 0; off + size <= data.size(); off += size) {
                const auto p = classifier.classify(std::span<const std::uint8_t>(data.data() + off, size));
                nlohmann::ordered_json probs;
                const auto labels = bundle.label_map();
                for (std::size_t i = 0; i < labels.size(); ++i) probs[labels[i]] = p.probabilities[i];
                out += nlohmann::ordered_json{{"offset", off}, {"label", p.label}, {"probabilities", probs}}.dump();
                out += '\n';
            }
            std::cout << out;
        };
    });
}

}  // namespace encod::cli
