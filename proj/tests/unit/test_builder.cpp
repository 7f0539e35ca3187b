#include <gtest/gtest.h>

#include "encod/corpus/builder.hpp"
#include "encod/corpus/codecs.hpp"
#include "encod/error.hpp"
#include "encod/util/digest.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace encod;
using namespace encod::corpus;

namespace {

BuildOptions options(const testkit::TempDir& dir, const std::string& out) {
    BuildOptions o;
    o.source_dirs = {dir / "src"};
    o.codecs = {CodecLabel::enc, CodecLabel::gzip};
    o.sizes = {512};
    o.quota = 10;
    o.seed = 5;
    o.out_dir = dir / out;
    return o;
}

std::string file_text(const std::filesystem::path& p) {
    const auto b = util::read_file(p);
    return {b.begin(), b.end()};
}

}  // namespace

TEST(BuildCorpus, SingleFileRespectsQuota) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 1, 40000, 1);
    const auto m = build_corpus(options(dir, "out"));
    EXPECT_LE(m.count(CodecLabel::enc, 512), 10u);
    EXPECT_LE(m.count(CodecLabel::gzip, 512), 10u);
    EXPECT_GT(m.count(CodecLabel::gzip, 512), 0u);
    for (const auto& e : m.entries) EXPECT_EQ(e.size, 512u);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / kManifestFileName));
    EXPECT_TRUE(verify_manifest(m).empty());
}

TEST(BuildCorpus, SameSeedSameManifestBytes) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 6, 20000, 2);
    auto a = options(dir, "a");
    auto b = options(dir, "b");
    a.sizes = b.sizes = {512, 1024};
    a.codecs = b.codecs = {CodecLabel::enc, CodecLabel::gzip, CodecLabel::zip, CodecLabel::xz};
    build_corpus(a);
    b.jobs = 3;  // thread count must not matter
    build_corpus(b);
    EXPECT_EQ(file_text(dir / "a" / kManifestFileName), file_text(dir / "b" / kManifestFileName));
}

TEST(BuildCorpus, DifferentSeedDifferentSample) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 6, 20000, 2);
    auto a = options(dir, "a");
    auto b = options(dir, "b");
    b.seed = 6;
    EXPECT_NE(build_corpus(a).entries, build_corpus(b).entries);
}

TEST(BuildCorpus, BalancedWhenEnoughMaterial) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 4, 30000, 3);
    auto o = options(dir, "out");
    o.sizes = {512, 1024};
    const auto m = build_corpus(o);
    EXPECT_TRUE(m.balanced);
    for (auto l : o.codecs)
        for (auto s : o.sizes) EXPECT_EQ(m.count(l, s), 10u);
}

TEST(BuildCorpus, ShortfallIsRecordedNotFatal) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 1, 3000, 4);
    auto o = options(dir, "out");
    o.quota = 1000;
    const auto m = build_corpus(o);
    EXPECT_FALSE(m.balanced);
    EXPECT_GT(m.count(CodecLabel::enc, 512), 0u);
    EXPECT_LT(m.count(CodecLabel::enc, 512), 1000u);
    bool noted = false;
    for (const auto& n : m.notes) noted |= n.rfind("enc:", 0) == 0;
    EXPECT_TRUE(noted);
}

TEST(BuildCorpus, FragmentsComeFromTheirOwnTransform) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 2, 20000, 5);
    const auto m = build_corpus(options(dir, "out"));
    for (const auto& e : m.entries) {
        const std::string prefix = "data/" + std::string(to_string(e.label)) + "/";
        EXPECT_EQ(e.path.rfind(prefix, 0), 0u) << e.path;
        EXPECT_EQ(e.offset % e.size, 0u);
    }
    ASSERT_TRUE(m.providers.count("enc"));
    EXPECT_GT(m.providers.at("enc").files_used, 0u);
}

TEST(BuildCorpus, InlineModeWritesOneFilePerFragment) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 2, 20000, 6);
    auto o = options(dir, "out");
    o.mode = StorageMode::inline_files;
    const auto m = build_corpus(o);
    EXPECT_EQ(m.mode, StorageMode::inline_files);
    for (const auto& e : m.entries) {
        EXPECT_EQ(e.offset, 0u);
        EXPECT_EQ(std::filesystem::file_size(dir / "out" / e.path), e.size);
    }
    EXPECT_TRUE(verify_manifest(m).empty());
}

TEST(BuildCorpus, UnavailableCodecIsNoted) {
    if (default_provider(CodecLabel::rar)->available()) GTEST_SKIP() << "rar is installed here";
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 1, 20000, 7);
    auto o = options(dir, "out");
    o.codecs = {CodecLabel::enc, CodecLabel::rar};
    const auto m = build_corpus(o);
    EXPECT_EQ(m.count(CodecLabel::rar, 512), 0u);
    bool noted = false;
    for (const auto& n : m.notes) noted |= n.find("rar") != std::string::npos;
    EXPECT_TRUE(noted);
}

TEST(BuildCorpus, RejectsBadArguments) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 1, 2000, 8);
    auto o = options(dir, "out");
    o.quota = 0;
    EXPECT_THROW(build_corpus(o), ArgumentError);
    o = options(dir, "out");
    o.codecs = {CodecLabel::png};
    EXPECT_THROW(build_corpus(o), ArgumentError);
}

TEST(BuildCorpus, SkipsAlreadyCompressedSources) {
    EXPECT_TRUE(looks_compressed(testkit::random_bytes(8192, 1)));
    const util::Bytes gz = {0x1f, 0x8b, 8, 0, 0, 0, 0, 0};
    EXPECT_TRUE(looks_compressed(gz));
    const std::string plain(8192, 'a');
    EXPECT_FALSE(looks_compressed(util::Bytes(plain.begin(), plain.end())));
}

TEST(IngestMedia, FragmentsFilesAsIs) {
    testkit::TempDir dir;
    std::filesystem::create_directories(dir / "media");
    const auto blob = testkit::random_bytes(10000, 4);
    util::write_file(dir / "media" / "a.png", blob);
    IngestOptions o;
    o.dir = dir / "media";
    o.label = CodecLabel::png;
    o.sizes = {2048};
    o.quota = 3;
    o.seed = 1;
    o.out_dir = dir / "out";
    const auto m = ingest_into(o);
    ASSERT_EQ(m.count(CodecLabel::png, 2048), 3u);
    FragmentReader reader(m.base_dir);
    for (const auto& e : m.select(CodecLabel::png, 2048)) {
        const auto bytes = reader.read(e);
        EXPECT_TRUE(std::equal(bytes.begin(), bytes.end(), blob.begin() + e.offset));
    }
    EXPECT_EQ(ingest_media(o).entries, ingest_media(o).entries);
}

TEST(IngestMedia, QuotaAboveAvailabilityKeepsAll) {
    testkit::TempDir dir;
    std::filesystem::create_directories(dir / "media");
    util::write_file(dir / "media" / "a.mp3", testkit::random_bytes(5000, 4));
    IngestOptions o;
    o.dir = dir / "media";
    o.label = CodecLabel::mp3;
    o.sizes = {2048};
    o.quota = 50;
    o.out_dir = dir / "out";
    const auto m = ingest_media(o);
    EXPECT_EQ(m.count(CodecLabel::mp3, 2048), 2u);
    EXPECT_FALSE(m.balanced);
}

TEST(IngestMedia, EmptyDirectoryWarns) {
    testkit::TempDir dir;
    std::filesystem::create_directories(dir / "media");
    IngestOptions o;
    o.dir = dir / "media";
    o.label = CodecLabel::jpeg;
    o.out_dir = dir / "out";
    const auto m = ingest_media(o);
    EXPECT_TRUE(m.entries.empty());
    EXPECT_FALSE(m.notes.empty());
    EXPECT_FALSE(m.balanced);
}

TEST(IngestMedia, RejectsTransformLabels) {
    testkit::TempDir dir;
    IngestOptions o;
    o.dir = dir.path();
    o.label = CodecLabel::gzip;
    o.out_dir = dir / "out";
    EXPECT_THROW(ingest_media(o), ArgumentError);
}

TEST(IngestMedia, MergesIntoExistingCorpus) {
    testkit::TempDir dir;
    testkit::write_text_sources(dir / "src", 2, 20000, 9);
    build_corpus(options(dir, "out"));
    std::filesystem::create_directories(dir / "media");
    util::write_file(dir / "media" / "a.pdf", testkit::random_bytes(6000, 4));
    IngestOptions o;
    o.dir = dir / "media";
    o.label = CodecLabel::pdf;
    o.sizes = {512};
    o.quota = 5;
    o.out_dir = dir / "out";
    ingest_into(o);
    const auto m = read_manifest(dir / "out" / kManifestFileName);
    EXPECT_EQ(m.count(CodecLabel::pdf, 512), 5u);
    EXPECT_EQ(m.count(CodecLabel::enc, 512), 10u);
    EXPECT_TRUE(verify_manifest(m).empty());
}
