#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>

#include <unistd.h>

namespace encod::testkit {

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("encod-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_text_sources(const std::filesystem::path& dir, int count, std::size_t bytes, unsigned seed) {
    static const char* words[] = {"the",    "fragment", "of",     "data",   "compressed", "stream",
                                  "random", "block",    "cipher", "header", "value",      "entropy",
                                  "and",    "a",        "to",     "file",   "network",    "packet",
                                  "is",     "with",     "for",    "test",   "format",     "byte"};
    std::filesystem::create_directories(dir);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, sizeof(words) / sizeof(words[0]) - 1);
    std::uniform_int_distribution<int> num(0, 99999);
    for (int f = 0; f < count; ++f) {
        std::ofstream out(dir / ("doc" + std::to_string(f) + ".txt"));
        std::size_t written = 0;
        int col = 0;
        while (written < bytes) {
            std::string w = (rng() % 9 == 0) ? std::to_string(num(rng)) : words[pick(rng)];
            w += (++col % 12 == 0) ? ".\n" : " ";
            out << w;
            written += w.size();
        }
    }
}

}  // namespace encod::testkit
