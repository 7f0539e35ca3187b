#include <algorithm>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "encod/error.hpp"
#include "encod/randomness/entropy.hpp"
#include "encod/randomness/hedge.hpp"
#include "encod/randomness/suite.hpp"
#include "encod/util/digest.hpp"
#include "encod/util/parallel.hpp"

namespace encod::cli {
namespace {

using nlohmann::ordered_json;

ordered_json result_json(const randomness::TestResult& r) {
    ordered_json j = {{"test", r.test_id}, {"statistic", r.statistic}};
    j["p_value"] = r.p_value ? ordered_json(*r.p_value) : ordered_json(nullptr);
    j["passed"] = r.passed;
    j["applicable"] = r.applicable;
    return j;
}

struct Unit {
    std::string path;
    std::uint64_t offset = 0;
    std::string label;
    util::Bytes bytes;
};

}  // namespace

void register_stat(CLI::App& app, Action& action) {
    auto* stat = app.add_subcommand("stat", "Statistical randomness tests");
    stat->alias("stat-test");
    stat->require_subcommand(1);

    struct RunArgs {
        std::string manifest;
        std::string input;
        std::size_t size = 0;
        std::vector<std::string> tests = randomness::builtin_test_ids();
        double alpha = randomness::kDefaultAlpha;
        std::string calibration;
        double k = 2.0;
        bool json = false;
        std::string out;
        std::size_t limit = 0;
        unsigned jobs = 0;
    };
    auto r = std::make_shared<RunArgs>();
    auto* run = stat->add_subcommand("run", "Run tests per fragment; JSON-lines output, one object per fragment");
    auto* m_opt = run->add_option("--manifest", r->manifest, "Manifest whose fragments are tested");
    auto* i_opt = run->add_option("--input", r->input, "Raw file to test ('-' for stdin)");
    m_opt->excludes(i_opt);
    run->add_option("--size", r->size, "Fragment size for --input (default: whole input as one fragment)");
    run->add_option("--tests", r->tests,
                    "Tests: monobit,block_frequency,runs,longest_run,cusum,approx_entropy,serial,chi_abs,chi_ci,hedge,"
                    "entropy")
        ->delimiter(',');
    run->add_option("--alpha", r->alpha, "Significance level of the bit-level tests");
    run->add_option("--calibration", r->calibration, "Chi-square calibration JSON (chi_abs, hedge)");
    run->add_option("--k", r->k, "Chi-square absolute window multiplier");
    run->add_flag("--json", r->json, "Emit JSON-lines (the default and only format)");
    run->add_option("--out", r->out, "Output path (default stdout)");
    run->add_option("--limit", r->limit, "Test at most this many fragments");
    run->add_option("--jobs", r->jobs, "Worker threads");
    run->callback([r, &action] {
        action = [r] {
            if (r->manifest.empty() == r->input.empty()) throw ArgumentError("give exactly one of --manifest or --input");
            randomness::NistParams params;
            params.alpha = r->alpha;
            std::vector<std::string> nist_ids;
            bool want_abs = false, want_ci = false, want_hedge = false, want_entropy = false;
            for (const auto& t : r->tests) {
                if (t == "chi_abs") want_abs = true;
                else if (t == "chi_ci") want_ci = true;
                else if (t == "hedge") want_hedge = true;
                else if (t == "entropy") want_entropy = true;
                else nist_ids.push_back(t);
            }
            const auto suite = randomness::SuiteConfig::from_ids(nist_ids, params);

            std::vector<Unit> units;
            std::optional<corpus::Manifest> manifest;
            if (!r->manifest.empty()) {
                manifest = corpus::read_manifest(r->manifest);
                corpus::FragmentReader reader(manifest->base_dir);
                for (const auto& e : manifest->entries) {
                    if (r->limit && units.size() >= r->limit) break;
                    units.push_back({e.path, e.offset, std::string(corpus::to_string(e.label)), reader.read(e)});
                }
            } else {
                util::Bytes data;
                if (r->input == "-") {
                    std::ostringstream ss;
                    ss << std::cin.rdbuf();
                    const std::string s = ss.str();
                    data.assign(s.begin(), s.end());
                } else {
                    data = util::read_file(r->input);
                }
                if (data.empty()) throw DataError("input is empty");
                const std::size_t size = r->size ? r->size : data.size();
                if (data.size() < size) throw DataError("input smaller than fragment size");
                for (std::size_t off = 0; off + size <= data.size(); off += size) {
                    if (r->limit && units.size() >= r->limit) break;
                    units.push_back({r->input, off, "", util::Bytes(data.begin() + off, data.begin() + off + size)});
                }
            }

            randomness::HedgeConfig hedge_cfg;
            hedge_cfg.params = params;
            if (want_abs || want_hedge) {
                std::vector<std::size_t> sizes;
                for (const auto& u : units)
                    if (std::find(sizes.begin(), sizes.end(), u.bytes.size()) == sizes.end()) sizes.push_back(u.bytes.size());
                hedge_cfg.calibration = load_or_calibrate(r->calibration, manifest ? &*manifest : nullptr, sizes, r->k);
            }

            std::vector<std::string> lines(units.size());
            util::parallel_for(units.size(), resolve_jobs(r->jobs), [&](std::size_t i) {
                const auto& u = units[i];
                auto verdict = randomness::nist_majority_vote(u.bytes, suite);
                std::vector<randomness::TestResult> results = verdict.results;
                if (want_abs) results.push_back(randomness::chi_abs_test(u.bytes, hedge_cfg.calibration));
                if (want_ci) results.push_back(randomness::chi_ci_test(u.bytes));
                if (want_hedge) results.push_back(randomness::hedge(u.bytes, hedge_cfg));
                const auto tally = randomness::tally_votes(results);
                ordered_json j = {{"path", u.path}, {"offset", u.offset}, {"size", u.bytes.size()}};
                if (!u.label.empty()) j["label"] = u.label;
                if (want_entropy) j["entropy"] = randomness::entropy_mle(u.bytes);
                ordered_json arr = ordered_json::array();
                for (const auto& t : tally.results) arr.push_back(result_json(t));
                j["results"] = arr;
                j["votes_for"] = tally.votes_for;
                j["votes_against"] = tally.votes_against;
                j["verdict"] = randomness::to_string(tally.verdict);
                lines[i] = j.dump();
            });
            std::string text;
            for (const auto& l : lines) text += l + "\n";
            if (r->out.empty()) {
                std::cout << text;
            } else {
                const auto out = resolve_out(r->out);
                write_text(out, text);
                std::vector<std::filesystem::path> inputs;
                if (!r->manifest.empty()) inputs.emplace_back(r->manifest);
                if (!r->input.empty() && r->input != "-") inputs.emplace_back(r->input);
                if (!r->calibration.empty()) inputs.emplace_back(r->calibration);
                write_provenance(out, "stat run",
                                 {{"manifest", r->manifest}, {"input", r->input}, {"size", r->size}, {"tests", r->tests},
                                  {"alpha", r->alpha}, {"calibration", r->calibration}, {"k", r->k}, {"limit", r->limit}},
                                 inputs);
            }
        };
    });

    struct CalArgs {
        std::string manifest;
        std::string out;
        std::vector<std::string> sizes;
        double k = 2.0;
    };
    auto c = std::make_shared<CalArgs>();
    auto* cal = stat->add_subcommand("calibrate", "Fit per-size chi-square moments on enc fragments");
    cal->add_option("--manifest", c->manifest, "Manifest with enc fragments")->required();
    cal->add_option("--out", c->out, "Calibration JSON output ({size: {mu, sigma}})")->required();
    cal->add_option("--sizes", c->sizes, "Sizes to calibrate (default: every size with enc fragments)")->delimiter(',');
    cal->add_option("--k", c->k, "Window multiplier recorded in the provenance");
    cal->callback([c, &action] {
        action = [c] {
            const auto m = corpus::read_manifest(c->manifest);
            auto sizes = parse_sizes(c->sizes);
            if (sizes.empty())
                for (auto s : corpus::kSizeClasses)
                    if (m.count(corpus::CodecLabel::enc, s) > 0) sizes.push_back(s);
            if (sizes.empty()) throw DataError("manifest has no enc fragments to calibrate on");
            const auto calib = load_or_calibrate("", &m, sizes, c->k);
            const auto out = resolve_out(c->out);
            write_text(out, randomness::calibration_to_json(calib) + "\n");
            for (const auto& [size, mom] : calib.by_size)
                std::cout << size << ": mu=" << mom.mu << " sigma=" << mom.sigma << "\n";
            write_provenance(out, "stat calibrate", {{"manifest", c->manifest}, {"sizes", sizes}, {"k", c->k}},
                             {c->manifest});
        };
    });
}

}  // namespace encod::cli
