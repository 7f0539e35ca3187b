#include "encod/corpus/builder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "encod/corpus/codecs.hpp"
#include "encod/error.hpp"
#include "encod/util/digest.hpp"
#include "encod/util/parallel.hpp"

namespace encod::corpus {
namespace fs = std::filesystem;
namespace {

constexpr std::size_t kHeadBytes = 64 * 1024;
constexpr std::size_t kMinSourceBytes = 512;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return mix(mix(a, b), c); }

util::Bytes read_head(const fs::path& p, std::size_t n) {
    std::ifstream in(p, std::ios::binary);
    util::Bytes out(n);
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n));
    out.resize(static_cast<std::size_t>(std::max<std::streamsize>(0, in.gcount())));
    return out;
}

std::vector<fs::path> list_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (auto it = fs::recursive_directory_iterator(dir, fs::directory_options::skip_permission_denied);
         it != fs::recursive_directory_iterator(); ++it) {
        std::error_code ec;
        if (it->is_symlink(ec)) {
            if (it->is_directory(ec)) it.disable_recursion_pending();
            continue;
        }
        if (it->is_regular_file(ec)) out.push_back(it->path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Candidate {
    std::uint32_t file;
    std::uint64_t offset;
};

/// Seeded partial Fisher-Yates; result is sorted by (file, offset).
std::vector<Candidate> sample_candidates(std::vector<Candidate> pool, std::size_t quota, std::uint64_t seed) {
    const std::size_t take = std::min(quota, pool.size());
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
        return a.file != b.file ? a.file < b.file : a.offset < b.offset;
    });
    return pool;
}

std::string relative_to(const fs::path& p, const fs::path& base) {
    const fs::path rel = fs::proximate(p, base);
    return rel.generic_string();
}

std::vector<std::size_t> checked_sizes(const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw ArgumentError("no fragment sizes requested");
    std::set<std::size_t> uniq(sizes.begin(), sizes.end());
    for (std::size_t s : uniq) require_size_class(s);
    return {uniq.begin(), uniq.end()};
}

/// Turns sampled candidates into manifest entries, hashing each fragment and,
/// in inline mode, copying it to its own file.
std::vector<ManifestEntry> materialize(const std::vector<Candidate>& picks, std::size_t size, CodecLabel label,
                                       const std::vector<fs::path>& files, const std::vector<std::string>& origins,
                                       const fs::path& out_dir, StorageMode mode) {
    std::vector<ManifestEntry> entries;
    entries.reserve(picks.size());
    FragmentReader reader("/");
    const fs::path inline_dir = out_dir / "data" / std::string(to_string(label)) / std::to_string(size);
    if (mode == StorageMode::inline_files) fs::create_directories(inline_dir);
    util::Bytes buf;
    std::size_t n = 0;
    for (const auto& c : picks) {
        const fs::path src = fs::absolute(files[c.file]);
        ManifestEntry e;
        reader.read_into(ManifestEntry{src.string(), c.offset, size, label, {}, {}}, buf);
        e.size = size;
        e.label = label;
        e.origin = origins[c.file];
        e.sha256 = util::sha256_hex(buf);
        if (mode == StorageMode::inline_files) {
            const fs::path dst = inline_dir / (std::to_string(n++) + ".bin");
            util::write_file(dst, buf);
            e.path = relative_to(dst, out_dir);
            e.offset = 0;
        } else {
            e.path = relative_to(src, out_dir);
            e.offset = c.offset;
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

Manifest merge_into_existing(const Manifest& fresh, const fs::path& out_dir) {
    const fs::path path = out_dir / kManifestFileName;
    Manifest merged;
    if (fs::exists(path)) merged = read_manifest(path);
    merged.merge(fresh);
    merged.base_dir = out_dir;
    write_manifest(merged, path);
    return merged;
}

}  // namespace

bool looks_compressed(util::ByteView head) {
    auto starts = [&](std::initializer_list<std::uint8_t> magic) {
        return head.size() >= magic.size() && std::equal(magic.begin(), magic.end(), head.begin());
    };
    if (starts({0x1f, 0x8b}) || starts({'B', 'Z', 'h'}) || starts({0xfd, '7', 'z', 'X', 'Z', 0x00}) ||
        starts({'P', 'K', 0x03, 0x04}) || starts({0x89, 'P', 'N', 'G'}) || starts({0xff, 0xd8, 0xff}) ||
        starts({'7', 'z', 0xbc, 0xaf, 0x27, 0x1c}) || starts({0x28, 0xb5, 0x2f, 0xfd}) ||
        starts({'R', 'a', 'r', '!'}) || starts({0x5d, 0x00, 0x00}))
        return true;
    if (head.size() < 4096) return false;
    std::array<std::size_t, 256> counts{};
    for (std::uint8_t b : head) ++counts[b];
    double h = 0.0;
    const double n = static_cast<double>(head.size());
    for (std::size_t c : counts)
        if (c) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log2(p);
        }
    return h > 7.5;
}

Manifest build_corpus(const BuildOptions& options) {
    if (options.quota == 0) throw ArgumentError("quota must be positive");
    if (options.codecs.empty()) throw ArgumentError("no codecs requested");
    if (options.out_dir.empty()) throw ArgumentError("output directory not set");
    if (options.source_dirs.empty()) throw ArgumentError("no source directory given");
    for (CodecLabel c : options.codecs)
        if (!is_transform_label(c))
            throw ArgumentError("'" + std::string(to_string(c)) + "' is not a transform codec; use ingest");
    const auto sizes = checked_sizes(options.sizes);
    const fs::path out_dir = fs::absolute(options.out_dir);
    fs::create_directories(out_dir);

    // Plaintext pool: sorted, filtered, then visited in a seeded order.
    std::vector<fs::path> sources;
    for (const auto& d : options.source_dirs)
        for (auto& p : list_files(d)) {
            std::error_code ec;
            const auto sz = fs::file_size(p, ec);
            if (ec || sz < kMinSourceBytes) continue;
            if (options.skip_high_entropy_sources && looks_compressed(read_head(p, kHeadBytes))) continue;
            sources.push_back(std::move(p));
        }
    std::vector<std::uint32_t> order(sources.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    {
        std::mt19937_64 rng(mix(options.seed, 0x6f72646572ull));
        std::shuffle(order.begin(), order.end(), rng);
    }

    Manifest fresh;
    fresh.seed = options.seed;
    fresh.quota = options.quota;
    fresh.mode = options.mode;
    fresh.balanced = true;
    if (sources.empty()) fresh.notes.push_back("corpus: no usable source files found");

    const unsigned jobs = std::max(1u, options.jobs);
    std::set<CodecLabel> codecs(options.codecs.begin(), options.codecs.end());
    for (CodecLabel codec : codecs) {
        const std::string label_name(to_string(codec));
        const auto provider = default_provider(codec);
        if (!provider->available()) {
            fresh.notes.push_back(label_name + ": excluded, codec unavailable (" + provider->name() + ")");
            fresh.providers[label_name] = LabelSource{provider->name(), provider->version(), options.seed, options.quota, 0};
            continue;
        }
        const fs::path label_dir = out_dir / "data" / label_name;
        fs::remove_all(label_dir);
        fs::create_directories(label_dir);

        std::vector<fs::path> outputs;
        std::vector<std::string> origins;
        std::map<std::size_t, std::vector<Candidate>> pools;
        auto enough = [&] {
            for (std::size_t s : sizes)
                if (pools[s].size() < options.quota) return false;
            return true;
        };

        std::size_t next = 0, consumed = 0;
        while (next < order.size() && !enough()) {
            const std::size_t batch = std::min<std::size_t>(jobs, order.size() - next);
            std::vector<util::Bytes> transformed(batch);
            util::parallel_for(batch, jobs, [&](std::size_t i) {
                const std::uint32_t src = order[next + i];
                const util::Bytes plain = util::read_file(sources[src]);
                if (plain.empty()) return;
                const std::uint64_t file_seed = mix(options.seed, static_cast<std::uint64_t>(codec), src);
                transformed[i] = provider->transform(plain, file_seed, sources[src].filename().string());
            });
            // Consume results in source order and stop at the same file a
            // single-threaded run would, so the sample does not depend on jobs.
            for (std::size_t i = 0; i < batch; ++i) {
                if (enough()) break;
                ++consumed;
                const std::uint32_t src = order[next + i];
                if (transformed[i].size() < sizes.front()) continue;
                const fs::path dst = label_dir / (std::to_string(src) + "." + provider->extension());
                util::write_file(dst, transformed[i]);
                const auto file_index = static_cast<std::uint32_t>(outputs.size());
                outputs.push_back(dst);
                origins.push_back(sources[src].string());
                for (std::size_t s : sizes)
                    for (std::uint64_t off = 0; off + s <= transformed[i].size(); off += s)
                        pools[s].push_back(Candidate{file_index, off});
            }
            next += batch;
        }

        std::vector<bool> used(outputs.size(), false);
        for (std::size_t s : sizes) {
            auto& pool = pools[s];
            if (pool.size() < options.quota) {
                fresh.balanced = false;
                fresh.notes.push_back(label_name + ": size " + std::to_string(s) + " has " +
                                      std::to_string(pool.size()) + " of " + std::to_string(options.quota) +
                                      " requested fragments");
            }
            const auto picks = sample_candidates(std::move(pool), options.quota, mix(options.seed, static_cast<std::uint64_t>(codec), s));
            for (const auto& c : picks) used[c.file] = true;
            auto entries = materialize(picks, s, codec, outputs, origins, out_dir, options.mode);
            fresh.entries.insert(fresh.entries.end(), std::make_move_iterator(entries.begin()),
                                 std::make_move_iterator(entries.end()));
        }
        // Transformed files nothing points at are dead weight.
        for (std::size_t i = 0; i < outputs.size(); ++i)
            if (options.mode == StorageMode::inline_files || !used[i]) fs::remove(outputs[i]);

        fresh.providers[label_name] =
            LabelSource{provider->name(), provider->version(), options.seed, options.quota, consumed};
    }
    fresh.sort_entries();
    return merge_into_existing(fresh, out_dir);
}

Manifest ingest_media(const IngestOptions& options) {
    if (options.quota == 0) throw ArgumentError("quota must be positive");
    if (!is_ingest_label(options.label))
        throw ArgumentError("'" + std::string(to_string(options.label)) +
                            "' is a transform label; use corpus build for it");
    if (options.out_dir.empty()) throw ArgumentError("output directory not set");
    const auto sizes = checked_sizes(options.sizes);
    const fs::path out_dir = fs::absolute(options.out_dir);
    const std::string label_name(to_string(options.label));

    Manifest m;
    m.seed = options.seed;
    m.quota = options.quota;
    m.mode = options.mode;
    m.balanced = true;

    std::vector<fs::path> files;
    std::vector<std::string> origins;
    for (auto& p : list_files(options.dir)) {
        std::error_code ec;
        if (fs::file_size(p, ec) == 0 || ec) continue;
        origins.push_back(p.string());
        files.push_back(fs::absolute(p));
    }
    m.providers[label_name] = LabelSource{"ingest", "as-is", options.seed, options.quota, files.size()};
    if (files.empty()) {
        m.balanced = false;
        m.notes.push_back(label_name + ": no files found in " + options.dir.string());
        return m;
    }
    if (options.mode == StorageMode::inline_files) fs::remove_all(out_dir / "data" / label_name);

    for (std::size_t s : sizes) {
        std::vector<Candidate> pool;
        for (std::uint32_t f = 0; f < files.size(); ++f) {
            const auto sz = fs::file_size(files[f]);
            for (std::uint64_t off = 0; off + s <= sz; off += s) pool.push_back(Candidate{f, off});
        }
        if (pool.size() < options.quota) {
            m.balanced = false;
            m.notes.push_back(label_name + ": size " + std::to_string(s) + " has " + std::to_string(pool.size()) +
                              " of " + std::to_string(options.quota) + " requested fragments");
        }
        const auto picks = sample_candidates(std::move(pool), options.quota,
                                             mix(options.seed, static_cast<std::uint64_t>(options.label), s));
        auto entries = materialize(picks, s, options.label, files, origins, out_dir, options.mode);
        m.entries.insert(m.entries.end(), std::make_move_iterator(entries.begin()),
                         std::make_move_iterator(entries.end()));
    }
    m.sort_entries();
    m.base_dir = out_dir;
    return m;
}

Manifest ingest_into(const IngestOptions& options) {
    fs::create_directories(fs::absolute(options.out_dir));
    return merge_into_existing(ingest_media(options), fs::absolute(options.out_dir));
}

}  // namespace encod::corpus
