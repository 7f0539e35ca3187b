#include "encod/corpus/manifest.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "encod/error.hpp"
#include "encod/util/digest.hpp"

namespace encod::corpus {

using json = nlohmann::ordered_json;

std::string_view to_string(StorageMode mode) {
    return mode == StorageMode::reference ? "reference" : "inline";
}

StorageMode storage_mode_from_string(std::string_view name) {
    if (name == "reference") return StorageMode::reference;
    if (name == "inline") return StorageMode::inline_files;
    throw ArgumentError("unknown storage mode '" + std::string(name) + "'");
}

std::vector<ManifestEntry> Manifest::select(CodecLabel label, std::size_t size) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
        if (e.label == label && e.size == size) out.push_back(e);
    return out;
}

std::vector<ManifestEntry> Manifest::select_size(std::size_t size) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
        if (e.size == size) out.push_back(e);
    return out;
}

std::size_t Manifest::count(CodecLabel label, std::size_t size) const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const ManifestEntry& e) {
        return e.label == label && e.size == size;
    }));
}

bool Manifest::has_label(CodecLabel label) const {
    return std::any_of(entries.begin(), entries.end(), [&](const ManifestEntry& e) { return e.label == label; }) ||
           providers.count(std::string(to_string(label))) > 0;
}

void Manifest::merge(const Manifest& other) {
    std::set<std::string> replaced;
    for (const auto& [name, _] : other.providers) replaced.insert(name);
    for (const auto& e : other.entries) replaced.insert(std::string(to_string(e.label)));

    if (entries.empty() && providers.empty()) {
        seed = other.seed;
        quota = other.quota;
        mode = other.mode;
    }
    std::erase_if(entries, [&](const ManifestEntry& e) { return replaced.count(std::string(to_string(e.label))); });
    for (const auto& name : replaced) providers.erase(name);
    // Notes are "<label>: ..." scoped; drop the ones belonging to replaced labels.
    std::erase_if(notes, [&](const std::string& n) {
        const auto colon = n.find(':');
        return colon != std::string::npos && replaced.count(n.substr(0, colon));
    });

    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    for (const auto& [name, src] : other.providers) providers[name] = src;
    for (const auto& n : other.notes)
        if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);

    std::set<std::size_t> sizes;
    for (const auto& e : entries) sizes.insert(e.size);
    bool all_full = true;
    for (const auto& [name, src] : providers) {
        const auto label = parse_label(name);
        if (!label) continue;
        for (std::size_t s : sizes)
            if (count(*label, s) != src.quota) all_full = false;
    }
    balanced = all_full;
    sort_entries();
}

void Manifest::sort_entries() {
    std::sort(entries.begin(), entries.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
        if (a.label != b.label) return a.label < b.label;
        if (a.size != b.size) return a.size < b.size;
        if (a.path != b.path) return a.path < b.path;
        return a.offset < b.offset;
    });
}

namespace {

json header_json(const Manifest& m) {
    json providers = json::object();
    for (const auto& [name, src] : m.providers)
        providers[name] = {{"provider", src.provider},
                           {"version", src.version},
                           {"seed", src.seed},
                           {"quota", src.quota},
                           {"files_used", src.files_used}};
    return {{"seed", m.seed},     {"quota", m.quota},       {"providers", providers},
            {"mode", to_string(m.mode)}, {"balanced", m.balanced}, {"notes", m.notes}};
}

json entry_json(const ManifestEntry& e) {
    return {{"path", e.path},   {"offset", e.offset}, {"size", e.size},
            {"label", to_string(e.label)}, {"origin", e.origin}, {"sha256", e.sha256}};
}

}  // namespace

std::string serialize_manifest(const Manifest& manifest) {
    std::string out = header_json(manifest).dump();
    out += '\n';
    for (const auto& e : manifest.entries) {
        out += entry_json(e).dump();
        out += '\n';
    }
    return out;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::string text = serialize_manifest(manifest);
    const auto tmp = path.string() + ".tmp";
    util::write_file(tmp, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    std::filesystem::rename(tmp, path);
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path.string());
    Manifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::string line;
    std::size_t lineno = 0;
    try {
        if (!std::getline(in, line)) throw DataError("manifest " + path.string() + " is empty");
        ++lineno;
        const json h = json::parse(line);
        m.seed = h.at("seed").get<std::uint64_t>();
        m.quota = h.at("quota").get<std::size_t>();
        m.mode = storage_mode_from_string(h.value("mode", std::string("reference")));
        m.balanced = h.value("balanced", true);
        m.notes = h.value("notes", std::vector<std::string>{});
        for (const auto& [name, p] : h.at("providers").items())
            m.providers[name] = LabelSource{p.at("provider").get<std::string>(), p.at("version").get<std::string>(),
                                            p.at("seed").get<std::uint64_t>(), p.at("quota").get<std::size_t>(),
                                            p.at("files_used").get<std::size_t>()};
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const json j = json::parse(line);
            ManifestEntry e;
            e.path = j.at("path").get<std::string>();
            e.offset = j.at("offset").get<std::uint64_t>();
            e.size = j.at("size").get<std::size_t>();
            e.label = label_from_string(j.at("label").get<std::string>());
            e.origin = j.at("origin").get<std::string>();
            e.sha256 = j.at("sha256").get<std::string>();
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw DataError("manifest " + path.string() + " line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const ArgumentError& ex) {
        throw DataError("manifest " + path.string() + " line " + std::to_string(lineno) + ": " + ex.what());
    }
    return m;
}

FragmentReader::FragmentReader(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

util::Bytes FragmentReader::read(const ManifestEntry& entry) {
    util::Bytes out;
    read_into(entry, out);
    return out;
}

void FragmentReader::read_into(const ManifestEntry& entry, util::Bytes& out) {
    std::filesystem::path p(entry.path);
    if (p.is_relative()) p = base_dir_ / p;
    if (p != open_path_ || !stream_.is_open()) {
        stream_.close();
        stream_.clear();
        stream_.open(p, std::ios::binary);
        if (!stream_) {
            open_path_.clear();
            throw DataError("cannot open fragment source " + p.string());
        }
        open_path_ = p;
    }
    out.resize(entry.size);
    stream_.clear();
    stream_.seekg(static_cast<std::streamoff>(entry.offset));
    stream_.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(entry.size));
    if (stream_.gcount() != static_cast<std::streamsize>(entry.size))
        throw DataError("short read of " + std::to_string(entry.size) + " bytes at offset " +
                        std::to_string(entry.offset) + " in " + p.string());
}

std::vector<ManifestEntry> verify_manifest(const Manifest& manifest) {
    FragmentReader reader(manifest.base_dir);
    std::vector<ManifestEntry> bad;
    util::Bytes buf;
    for (const auto& e : manifest.entries) {
        try {
            reader.read_into(e, buf);
            if (util::sha256_hex(buf) != e.sha256) bad.push_back(e);
        } catch (const DataError&) {
            bad.push_back(e);
        }
    }
    return bad;
}

}  // namespace encod::corpus
