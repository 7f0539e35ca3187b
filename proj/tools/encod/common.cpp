#include "common.hpp"

#include <algorithm>
#include <cstdlib>

#include "encod/error.hpp"
#include "encod/util/digest.hpp"
#include "encod/util/parallel.hpp"

namespace encod::cli {
namespace fs = std::filesystem;

fs::path resolve_out(const std::string& out) {
    fs::path p(out);
    if (p.is_relative())
        if (const char* dir = std::getenv("ENCOD_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    return p;
}

unsigned resolve_jobs(unsigned flag) { return flag > 0 ? flag : util::jobs_from_env(1); }

void write_provenance(const fs::path& out, const std::string& command, const nlohmann::ordered_json& config,
                      const std::vector<fs::path>& inputs, const std::string& tag) {
    nlohmann::ordered_json digests = nlohmann::ordered_json::object();
    for (const auto& in : inputs)
        if (fs::is_regular_file(in)) digests[fs::absolute(in).string()] = util::sha256_file(in);
    nlohmann::ordered_json record = {{"tool", "encod"}, {"command", command}, {"config", config}, {"inputs", digests}};
    fs::path path = fs::path(out.string() + ".provenance.json");
    if (fs::is_directory(out)) {
        std::string name = "provenance." + command;
        if (!tag.empty()) name += "." + tag;
        std::replace(name.begin(), name.end(), ' ', '-');
        path = out / (name + ".json");
    }
    write_text(path, record.dump(2) + "\n");
}

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items) {
    std::vector<std::size_t> out;
    for (const auto& s : items) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            throw ArgumentError("bad fragment size '" + s + "'");
        }
        if (pos != s.size()) throw ArgumentError("bad fragment size '" + s + "'");
        corpus::require_size_class(v);
        out.push_back(v);
    }
    return out;
}

std::vector<corpus::CodecLabel> parse_labels(const std::vector<std::string>& items) {
    std::vector<corpus::CodecLabel> out;
    for (const auto& s : items) out.push_back(corpus::label_from_string(s));
    return out;
}

corpus::Manifest rebase_manifest(const corpus::Manifest& m, const fs::path& new_dir) {
    corpus::Manifest out = m;
    const fs::path target = fs::absolute(new_dir);
    for (auto& e : out.entries) {
        fs::path p(e.path);
        if (p.is_relative()) p = fs::absolute(m.base_dir) / p;
        e.path = fs::proximate(p.lexically_normal(), target).generic_string();
    }
    out.base_dir = target;
    return out;
}

randomness::ChiSquareCalibration load_or_calibrate(const std::string& path, const corpus::Manifest* manifest,
                                                   const std::vector<std::size_t>& sizes, double k) {
    if (!path.empty()) {
        const auto raw = util::read_file(path);
        auto cal = randomness::calibration_from_json(std::string(raw.begin(), raw.end()));
        cal.k = k;
        return cal;
    }
    if (!manifest) throw ConfigError("no chi-square calibration given (use --calibration)");
    std::map<std::size_t, std::vector<double>> stats;
    corpus::FragmentReader reader(manifest->base_dir);
    util::Bytes buf;
    for (std::size_t s : sizes) {
        for (const auto& e : manifest->entries)
            if (e.label == corpus::CodecLabel::enc && e.size == s) {
                reader.read_into(e, buf);
                stats[s].push_back(randomness::chi_square_stat(buf));
            }
    }
    return randomness::calibrate_chi_abs_from_stats(stats, k);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    util::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace encod::cli
