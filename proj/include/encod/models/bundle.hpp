#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "encod/corpus/codec_label.hpp"
#include "encod/features/scaler.hpp"
#include "encod/nn/network.hpp"

namespace encod::models {

/// One output class of a classifier and the base labels it covers
/// (a single label, or a macro such as cmp or video).
struct ClassDef {
    std::string name;
    std::vector<corpus::CodecLabel> members;

    bool operator==(const ClassDef&) const = default;
};

ClassDef class_for(std::string_view label_or_macro);

enum class BundleKind { binary, multiclass, ae_classifier };
std::string_view to_string(BundleKind kind);
BundleKind bundle_kind_from_string(std::string_view name);

struct NamedNetwork {
    std::string name;  ///< "classifier", "encoder" or "head"
    nn::NetworkSpec spec;
    nn::Network<float> net;
};

struct Fingerprint {
    std::uint64_t seed = 0;
    std::string corpus_digest;

    bool operator==(const Fingerprint&) const = default;
};

/// Everything needed for inference on one fragment size: networks applied in
/// order, the fitted scaler and the label map.
struct ModelBundle {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    BundleKind kind = BundleKind::binary;
    std::vector<NamedNetwork> networks;
    features::ScalerParams scaler;
    std::vector<ClassDef> classes;
    std::size_t size_class = 0;
    Fingerprint fingerprint;
    std::string metrics_json;  ///< held-out test metrics, may be empty

    std::vector<std::string> label_map() const;
    /// Output index covering a base label, if any.
    std::optional<std::size_t> class_index(corpus::CodecLabel label) const;
    /// Throws ArgumentError when the label map and output width disagree.
    void validate() const;
};

inline constexpr std::string_view kBundleMagic = "ENCOD1";

/// Magic line, one JSON header line, then one base64 line per weight blob
/// (row-major little-endian float32; W then b per layer per network).
std::string serialize_bundle(const ModelBundle& bundle);
/// Throws CorruptFile or VersionError.
ModelBundle deserialize_bundle(const std::string& data);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

/// SHA-256 of the serialized form.
std::string bundle_digest(const ModelBundle& bundle);

}  // namespace encod::models
