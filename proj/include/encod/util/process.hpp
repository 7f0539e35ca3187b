#pragma once

#include <optional>
#include <string>
#include <vector>

#include "encod/util/digest.hpp"

namespace encod::util {

struct ProcessResult {
    int exit_code = -1;
    Bytes out;
    Bytes err;
};

/// Runs argv[0] (PATH lookup) feeding `input` on stdin and collecting stdout/stderr.
/// Throws Error if the process cannot be spawned.
ProcessResult run_filter(const std::vector<std::string>& argv, ByteView input);

/// Absolute path of an executable found on PATH, if any.
std::optional<std::string> find_executable(const std::string& name);

}  // namespace encod::util
