#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "encod/error.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"encod: tell encrypted from compressed data fragments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "encod 1.0");

    encod::cli::Action action;
    encod::cli::register_corpus(app, action);
    encod::cli::register_features(app, action);
    encod::cli::register_stat(app, action);
    encod::cli::register_train(app, action);
    encod::cli::register_eval(app, action);
    encod::cli::register_classify(app, action);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (action) action();
        return kOk;
    } catch (const encod::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const encod::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kUsage;
    } catch (const encod::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const encod::CodecUnavailable& e) {
        std::cerr << "codec unavailable: " << e.what() << "\n";
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
