#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "encod/util/digest.hpp"
#include "support/fixtures.hpp"

using namespace encod;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI through the shell; stderr is folded into the captured output.
Run cli(const std::string& args) {
    const std::string cmd = std::string(ENCOD_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, HelpOnEverySubcommand) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"", {"corpus", "features", "stat", "train", "eval", "classify"}},
        {"corpus build", {"--src", "--codecs", "--sizes", "--quota", "--seed", "--out", "--mode", "--jobs"}},
        {"corpus ingest", {"--out"}},
        {"corpus verify", {}},
        {"features dump", {}},
        {"stat run", {"--manifest", "--input", "--tests", "--alpha", "--calibration"}},
        {"stat calibrate", {"--manifest", "--out"}},
        {"train binary", {"--manifest", "--size", "--seed", "--quota", "--label", "--swap-labels", "--epochs"}},
        {"train multiclass", {"--labels"}},
        {"train ae", {"--variant", "--label"}},
        {"eval model", {"--bundle", "--manifest"}},
        {"eval detector", {"--which", "--manifest"}},
        {"eval entropy-profile", {"--manifest"}},
        {"eval bench", {"--bundle", "--count", "--reps"}},
        {"classify", {"--bundle"}},
    };
    for (const auto& [sub, flags] : cases) {
        const auto r = cli(sub + " --help");
        EXPECT_EQ(r.code, 0) << sub;
        for (const auto& f : flags) EXPECT_NE(r.out.find(f), std::string::npos) << sub << " missing " << f;
    }
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("no-such-command").code, 1);
    EXPECT_EQ(cli("train binary --size 2048").code, 1);  // missing required flags
}

TEST(Cli, StatRunOnZeroFileIsNonRandom) {
    testkit::TempDir dir;
    util::write_file(dir / "zero.bin", util::Bytes(512, 0));
    const auto r = cli("stat-test run --input " + q(dir / "zero.bin") + " --tests monobit");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto line = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
    EXPECT_EQ(line["verdict"], "non_random");
    EXPECT_NEAR(line["results"][0]["p_value"].get<double>(), 0.0, 1e-12);
    EXPECT_FALSE(line["results"][0]["passed"].get<bool>());
}

class CliCorpus : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new testkit::TempDir();
        testkit::write_text_sources(dir_->path() / "src", 20, 20000, 5);
        const auto r = cli("corpus build --src " + q(dir_->path() / "src") +
                           " --codecs enc,gzip --sizes 512 --quota 150 --seed 2 --out " + q(dir_->path() / "c"));
        ASSERT_EQ(r.code, 0) << r.out;
    }
    static void TearDownTestSuite() { delete dir_; }

    static fs::path manifest() { return dir_->path() / "c" / "manifest.jsonl"; }
    static testkit::TempDir* dir_;
};

testkit::TempDir* CliCorpus::dir_ = nullptr;

TEST_F(CliCorpus, TrainTwiceGivesIdenticalBundles) {
    const std::string common = "train binary --manifest " + q(manifest()) +
                               " --size 512 --label gzip --seed 4 --quota 150 --epochs 3 --out ";
    const auto a = cli(common + q(dir_->path() / "a.bundle"));
    const auto b = cli(common + q(dir_->path() / "b.bundle"));
    ASSERT_EQ(a.code, 0) << a.out;
    ASSERT_EQ(b.code, 0) << b.out;
    EXPECT_EQ(util::sha256_file(dir_->path() / "a.bundle"), util::sha256_file(dir_->path() / "b.bundle"));
    EXPECT_TRUE(fs::exists(dir_->path() / "a.bundle.test.jsonl"));
    EXPECT_TRUE(fs::exists(dir_->path() / "a.bundle.provenance.json"));
    const auto prov = nlohmann::json::parse(
        [&] {
            const auto bytes = util::read_file(dir_->path() / "a.bundle.provenance.json");
            return std::string(bytes.begin(), bytes.end());
        }());
    EXPECT_EQ(prov["tool"], "encod");
    EXPECT_FALSE(prov["inputs"].empty());
}

TEST_F(CliCorpus, ClassifyRejectsShortInput) {
    const auto bundle = dir_->path() / "c.bundle";
    ASSERT_EQ(cli("train binary --manifest " + q(manifest()) +
                  " --size 512 --label gzip --quota 150 --epochs 2 --out " + q(bundle))
                  .code,
              0);
    util::write_file(dir_->path() / "short.bin", util::Bytes(100, 7));
    const auto r = cli("classify --bundle " + q(bundle) + " " + q(dir_->path() / "short.bin"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("input smaller than fragment size"), std::string::npos) << r.out;

    util::write_file(dir_->path() / "two.bin", util::Bytes(1024, 7));
    const auto ok = cli("classify --bundle " + q(bundle) + " " + q(dir_->path() / "two.bin"));
    ASSERT_EQ(ok.code, 0) << ok.out;
    std::istringstream lines(ok.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["offset"].get<int>(), 512 * n);
        EXPECT_NEAR(j["probabilities"]["enc"].get<double>() + j["probabilities"]["gzip"].get<double>(), 1.0, 1e-6);
        ++n;
    }
    EXPECT_EQ(n, 2);
}

TEST_F(CliCorpus, VerifyAndEntropyProfile) {
    EXPECT_EQ(cli("corpus verify --manifest " + q(manifest())).code, 0);
    const auto r = cli("eval entropy-profile --manifest " + q(manifest()) + " --out " + q(dir_->path() / "p.csv"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto csv = util::read_file(dir_->path() / "p.csv");
    const std::string text(csv.begin(), csv.end());
    EXPECT_NE(text.find("enc,512,150,"), std::string::npos) << text;
    EXPECT_NE(text.find("gzip,512,150,"), std::string::npos) << text;
}
