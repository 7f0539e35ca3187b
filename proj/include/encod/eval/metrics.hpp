#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace encod::eval {

/// counts[truth][predicted], indexed by `labels`.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint64_t>> counts;

    explicit ConfusionMatrix(std::vector<std::string> labels = {});

    void add(std::size_t truth, std::size_t predicted);
    std::uint64_t total() const;
    std::uint64_t trace() const;
    std::uint64_t row_sum(std::size_t truth) const;
    std::uint64_t col_sum(std::size_t predicted) const;
    double accuracy() const;
    ConfusionMatrix transposed() const;

    std::string to_csv() const;
    std::string to_json() const;
};

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

struct Metrics {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;

    const ClassMetrics& for_label(const std::string& label) const;
    std::string to_json() const;
};

Metrics metrics_from_confusion(ConfusionMatrix confusion);
/// Throws DataError on empty input, ArgumentError on length/index mismatch.
Metrics compute_metrics(const std::vector<std::string>& labels, const std::vector<std::size_t>& truth,
                        const std::vector<std::size_t>& predicted);

}  // namespace encod::eval
