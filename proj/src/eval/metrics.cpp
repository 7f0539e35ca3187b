#include "encod/eval/metrics.hpp"

#include <sstream>

#include <json.hpp>

#include "encod/error.hpp"

namespace encod::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels_in)
    : labels(std::move(labels_in)), counts(labels.size(), std::vector<std::uint64_t>(labels.size(), 0)) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
    if (truth >= labels.size() || predicted >= labels.size())
        throw ArgumentError("confusion matrix index out of range");
    ++counts[truth][predicted];
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::uint64_t t = 0;
    for (auto c : counts.at(truth)) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::uint64_t t = 0;
    for (const auto& row : counts) t += row.at(predicted);
    return t;
}

double ConfusionMatrix::accuracy() const {
    const auto t = total();
    return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

ConfusionMatrix ConfusionMatrix::transposed() const {
    ConfusionMatrix out(labels);
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::size_t j = 0; j < counts.size(); ++j) out.counts[j][i] = counts[i][j];
    return out;
}

std::string ConfusionMatrix::to_csv() const {
    std::ostringstream out;
    out << "truth\\predicted";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels[i];
        for (auto c : counts[i]) out << ',' << c;
        out << '\n';
    }
    return out.str();
}

std::string ConfusionMatrix::to_json() const {
    nlohmann::ordered_json j = {{"labels", labels}, {"counts", counts}};
    return j.dump();
}

const ClassMetrics& Metrics::for_label(const std::string& label) const {
    for (const auto& c : per_class)
        if (c.label == label) return c;
    throw ArgumentError("no metrics for label '" + label + "'");
}

std::string Metrics::to_json() const {
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto& c : per_class)
        classes.push_back({{"label", c.label},
                           {"precision", c.precision},
                           {"recall", c.recall},
                           {"f1", c.f1},
                           {"support", c.support}});
    nlohmann::ordered_json j = {{"accuracy", accuracy},
                                {"total", confusion.total()},
                                {"per_class", classes},
                                {"confusion", nlohmann::ordered_json::parse(confusion.to_json())}};
    return j.dump();
}

Metrics metrics_from_confusion(ConfusionMatrix confusion) {
    Metrics m;
    m.accuracy = confusion.accuracy();
    for (std::size_t i = 0; i < confusion.labels.size(); ++i) {
        ClassMetrics c;
        c.label = confusion.labels[i];
        const auto tp = static_cast<double>(confusion.counts[i][i]);
        const auto predicted = static_cast<double>(confusion.col_sum(i));
        c.support = confusion.row_sum(i);
        c.precision = predicted > 0 ? tp / predicted : 0.0;
        c.recall = c.support > 0 ? tp / static_cast<double>(c.support) : 0.0;
        c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
        m.per_class.push_back(c);
    }
    m.confusion = std::move(confusion);
    return m;
}

Metrics compute_metrics(const std::vector<std::string>& labels, const std::vector<std::size_t>& truth,
                        const std::vector<std::size_t>& predicted) {
    if (truth.empty()) throw DataError("cannot compute metrics on an empty test set");
    if (truth.size() != predicted.size()) throw ArgumentError("truth and prediction lengths differ");
    ConfusionMatrix cm(labels);
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return metrics_from_confusion(std::move(cm));
}

}  // namespace encod::eval
