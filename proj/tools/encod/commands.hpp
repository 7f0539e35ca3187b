#pragma once

#include <functional>

#include <CLI11.hpp>

namespace encod::cli {

/// Each register_* call adds a command group; the chosen leaf stores its work
/// in `action`, which main runs inside the error-to-exit-code mapping.
using Action = std::function<void()>;

void register_corpus(CLI::App& app, Action& action);
void register_features(CLI::App& app, Action& action);
void register_stat(CLI::App& app, Action& action);
void register_train(CLI::App& app, Action& action);
void register_eval(CLI::App& app, Action& action);
void register_classify(CLI::App& app, Action& action);

}  // namespace encod::cli
