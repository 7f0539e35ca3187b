#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "encod/corpus/manifest.hpp"
#include "encod/randomness/chi_square.hpp"

namespace encod::cli {

inline constexpr std::uint64_t kDefaultSeed = 7;

/// --out resolved against $ENCOD_OUT_DIR when relative.
std::filesystem::path resolve_out(const std::string& out);

/// --jobs when given (> 0), else $ENCOD_JOBS, else 1.
unsigned resolve_jobs(unsigned flag);

/// Writes <out>.provenance.json (or <out>/provenance.<command>[.<tag>].json
/// when out is a directory): command, resolved configuration and digests of
/// every input file.
void write_provenance(const std::filesystem::path& out, const std::string& command, const nlohmann::ordered_json& config,
                      const std::vector<std::filesystem::path>& inputs, const std::string& tag = {});

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items);
std::vector<corpus::CodecLabel> parse_labels(const std::vector<std::string>& items);

/// Copy of `m` whose relative entry paths resolve from `new_dir`.
corpus::Manifest rebase_manifest(const corpus::Manifest& m, const std::filesystem::path& new_dir);

/// Chi-square calibration from a JSON file, or measured on enc fragments of the
/// manifest at the given sizes when `path` is empty.
randomness::ChiSquareCalibration load_or_calibrate(const std::string& path, const corpus::Manifest* manifest,
                                                   const std::vector<std::size_t>& sizes, double k);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace encod::cli
