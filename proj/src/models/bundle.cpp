#include "encod/models/bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "encod/error.hpp"
#include "encod/util/digest.hpp"

namespace encod::models {

static_assert(std::endian::native == std::endian::little, "bundle blobs are stored little-endian");

using json = nlohmann::ordered_json;

ClassDef class_for(std::string_view label_or_macro) {
    if (auto l = corpus::parse_label(label_or_macro)) return ClassDef{std::string(label_or_macro), {*l}};
    return ClassDef{std::string(label_or_macro), corpus::macro_members(label_or_macro)};
}

std::string_view to_string(BundleKind kind) {
    switch (kind) {
        case BundleKind::binary: return "binary";
        case BundleKind::multiclass: return "multiclass";
        case BundleKind::ae_classifier: return "ae_classifier";
    }
    return "?";
}

BundleKind bundle_kind_from_string(std::string_view name) {
    for (auto k : {BundleKind::binary, BundleKind::multiclass, BundleKind::ae_classifier})
        if (to_string(k) == name) return k;
    throw ArgumentError("unknown bundle kind '" + std::string(name) + "'");
}

std::vector<std::string> ModelBundle::label_map() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.push_back(c.name);
    return out;
}

std::optional<std::size_t> ModelBundle::class_index(corpus::CodecLabel label) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (auto m : classes[i].members)
            if (m == label) return i;
    return std::nullopt;
}

void ModelBundle::validate() const {
    if (networks.empty()) throw ArgumentError("bundle has no networks");
    if (networks.front().net.input_width() != features::kFeatureWidth)
        throw ArgumentError("bundle's first network must take 256 features");
    for (std::size_t i = 0; i < networks.size(); ++i) {
        const auto& n = networks[i];
        if (n.net.layers().size() != n.spec.layer_count() || n.net.input_width() != n.spec.input_width() ||
            n.net.output_width() != n.spec.output_width())
            throw ArgumentError("bundle network '" + n.name + "' does not match its spec");
        if (i > 0 && networks[i - 1].net.output_width() != n.net.input_width())
            throw ArgumentError("bundle networks do not chain");
    }
    if (networks.back().net.output_width() != classes.size())
        throw ArgumentError("label map has " + std::to_string(classes.size()) + " entries for " +
                            std::to_string(networks.back().net.output_width()) + " outputs");
}

namespace {

json spec_json(const nn::NetworkSpec& s) {
    std::vector<std::string> acts;
    for (auto a : s.activations) acts.emplace_back(nn::to_string(a));
    return {{"dims", s.dims},
            {"activations", acts},
            {"initializer", nn::to_string(s.initializer)},
            {"loss", nn::to_string(s.loss)},
            {"batch_size", s.batch_size},
            {"epochs", s.epochs},
            {"patience", s.patience},
            {"learning_rate", s.learning_rate},
            {"rng_seed", s.rng_seed}};
}

nn::NetworkSpec spec_from_json(const json& j) {
    nn::NetworkSpec s;
    s.dims = j.at("dims").get<std::vector<std::size_t>>();
    for (const auto& a : j.at("activations")) s.activations.push_back(nn::activation_from_string(a.get<std::string>()));
    s.initializer = nn::initializer_from_string(j.at("initializer").get<std::string>());
    s.loss = nn::loss_from_string(j.at("loss").get<std::string>());
    s.batch_size = j.at("batch_size").get<std::size_t>();
    s.epochs = j.at("epochs").get<std::size_t>();
    s.patience = j.at("patience").get<std::size_t>();
    s.learning_rate = j.at("learning_rate").get<double>();
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    s.validate();
    return s;
}

template <typename M>
std::string encode_blob(const M& m) {
    return util::base64_encode(
        {reinterpret_cast<const std::uint8_t*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(float)});
}

template <typename M>
void decode_blob(const std::string& line, M& m) {
    const util::Bytes raw = util::base64_decode(line);
    if (raw.size() != static_cast<std::size_t>(m.size()) * sizeof(float))
        throw CorruptFile("weight blob has " + std::to_string(raw.size()) + " bytes, expected " +
                          std::to_string(m.size() * sizeof(float)));
    std::memcpy(m.data(), raw.data(), raw.size());
}

}  // namespace

std::string serialize_bundle(const ModelBundle& b) {
    b.validate();
    json classes = json::array();
    for (const auto& c : b.classes) {
        std::vector<std::string> members;
        for (auto m : c.members) members.emplace_back(corpus::to_string(m));
        classes.push_back({{"name", c.name}, {"members", members}});
    }
    json networks = json::array();
    for (const auto& n : b.networks) networks.push_back({{"name", n.name}, {"spec", spec_json(n.spec)}});
    json metrics = nullptr;
    if (!b.metrics_json.empty()) metrics = json::parse(b.metrics_json);

    const json header = {{"format_version", b.format_version},
                         {"kind", to_string(b.kind)},
                         {"size_class", b.size_class},
                         {"label_map", b.label_map()},
                         {"classes", classes},
                         {"networks", networks},
                         {"scaler", {{"min", b.scaler.min}, {"max", b.scaler.max}}},
                         {"fingerprint", {{"seed", b.fingerprint.seed}, {"corpus_digest", b.fingerprint.corpus_digest}}},
                         {"metrics", metrics}};

    std::string out(kBundleMagic);
    out += '\n';
    out += header.dump();
    out += '\n';
    for (const auto& n : b.networks)
        for (const auto& layer : n.net.layers()) {
            out += encode_blob(layer.weights);
            out += '\n';
            out += encode_blob(layer.bias);
            out += '\n';
        }
    return out;
}

ModelBundle deserialize_bundle(const std::string& data) {
    std::istringstream in(data);
    std::string line;
    if (!std::getline(in, line) || line != kBundleMagic) throw CorruptFile("not a model bundle (bad magic)");
    if (!std::getline(in, line) || in.eof()) throw CorruptFile("model bundle header is truncated");

    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw CorruptFile(std::string("model bundle header is malformed: ") + e.what());
    }

    ModelBundle b;
    try {
        b.format_version = header.at("format_version").get<int>();
        if (b.format_version > ModelBundle::kFormatVersion)
            throw VersionError("model bundle format version " + std::to_string(b.format_version) +
                               " is newer than supported version " + std::to_string(ModelBundle::kFormatVersion));
        if (b.format_version < 1) throw CorruptFile("invalid model bundle format version");
        b.kind = bundle_kind_from_string(header.at("kind").get<std::string>());
        b.size_class = header.at("size_class").get<std::size_t>();
        for (const auto& c : header.at("classes")) {
            ClassDef def{c.at("name").get<std::string>(), {}};
            for (const auto& m : c.at("members")) def.members.push_back(corpus::label_from_string(m.get<std::string>()));
            b.classes.push_back(std::move(def));
        }
        const auto& sc = header.at("scaler");
        b.scaler.min = sc.at("min").get<std::array<double, features::kFeatureWidth>>();
        b.scaler.max = sc.at("max").get<std::array<double, features::kFeatureWidth>>();
        b.fingerprint.seed = header.at("fingerprint").at("seed").get<std::uint64_t>();
        b.fingerprint.corpus_digest = header.at("fingerprint").at("corpus_digest").get<std::string>();
        if (!header.at("metrics").is_null()) b.metrics_json = header.at("metrics").dump();

        for (const auto& n : header.at("networks")) {
            NamedNetwork nn_;
            nn_.name = n.at("name").get<std::string>();
            nn_.spec = spec_from_json(n.at("spec"));
            std::vector<nn::DenseLayer<float>> layers;
            for (std::size_t i = 0; i < nn_.spec.layer_count(); ++i) {
                nn::DenseLayer<float> layer;
                layer.weights.resize(static_cast<Eigen::Index>(nn_.spec.dims[i]),
                                     static_cast<Eigen::Index>(nn_.spec.dims[i + 1]));
                layer.bias.resize(static_cast<Eigen::Index>(nn_.spec.dims[i + 1]));
                layer.activation = nn_.spec.activations[i];
                if (!std::getline(in, line)) throw CorruptFile("model bundle is truncated (missing weights)");
                decode_blob(line, layer.weights);
                if (!std::getline(in, line) || in.eof()) throw CorruptFile("model bundle is truncated (missing bias)");
                decode_blob(line, layer.bias);
                layers.push_back(std::move(layer));
            }
            nn_.net = nn::Network<float>(std::move(layers));
            b.networks.push_back(std::move(nn_));
        }
    } catch (const json::exception& e) {
        throw CorruptFile(std::string("model bundle header is invalid: ") + e.what());
    } catch (const ArgumentError& e) {
        throw CorruptFile(std::string("model bundle is inconsistent: ") + e.what());
    }
    if (std::getline(in, line) && !line.empty()) throw CorruptFile("model bundle has trailing data");
    try {
        b.validate();
    } catch (const ArgumentError& e) {
        throw CorruptFile(std::string("model bundle is inconsistent: ") + e.what());
    }
    return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    const std::string text = serialize_bundle(bundle);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    util::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

ModelBundle load_bundle(const std::filesystem::path& path) {
    const util::Bytes raw = util::read_file(path);
    return deserialize_bundle(std::string(raw.begin(), raw.end()));
}

std::string bundle_digest(const ModelBundle& bundle) { return util::sha256_hex(serialize_bundle(bundle)); }

}  // namespace encod::models
