#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "coindex/errors.hpp"
#include "coindex/metrics.hpp"
#include "coindex/pipeline.hpp"

namespace coindex {

// Which training objects the positive objects outside T are most similar
// to. Every classified positive is assigned to exactly one winner (the
// first training object attaining its aggregate score), so the counts sum
// to |D1 \ T|.
struct PrototypeHistogram {
    struct Row {
        int64_t train_id = 0;
        uint64_t count = 0;   // n(y)
        double fraction = 0.0; // h(y) = n(y) / total
    };
    std::vector<Row> rows; // n(y) descending, ties by id ascending; zero rows omitted
    uint64_t total = 0;    // |D1 \ T|
};

inline PrototypeHistogram prototype_histogram(const RunReport& report,
                                              const TrainedModel& model) {
    std::vector<uint64_t> counts(model.train_ids.size(), 0);
    uint64_t total = 0;
    for (const ObjectResult& o : report.objects) {
        if (!o.truth) continue;
        if (o.witness >= counts.size())
            throw DataError("witness index out of range");
        ++counts[o.witness];
        ++total;
    }
    if (total == 0)
        throw DataError("no positive objects outside the training set");
    PrototypeHistogram h;
    h.total = total;
    for (size_t k = 0; k < counts.size(); ++k)
        if (counts[k] > 0)
            h.rows.push_back({model.train_ids[k], counts[k],
                              static_cast<double>(counts[k]) / static_cast<double>(total)});
    std::sort(h.rows.begin(), h.rows.end(), [](const auto& a, const auto& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.train_id < b.train_id;
    });
    return h;
}

// Gini coefficient G = sum_ij |y_i - y_j| / (2 n sum_i y_i), computed via
// the sorted identity sum_ij |y_i - y_j| = 2 sum_k (2k - n - 1) y_(k).
inline double gini(std::vector<double> values) {
    if (values.empty())
        throw DataError("gini of empty input");
    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0)
            throw DataError("gini needs non-negative values");
        sum += v;
    }
    if (sum == 0.0)
        throw DataError("gini of all-zero input");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double abs_diff_total = 0.0;
    for (size_t k = 0; k < values.size(); ++k)
        abs_diff_total += (2.0 * static_cast<double>(k + 1) - n - 1.0) * values[k];
    abs_diff_total *= 2.0;
    return abs_diff_total / (2.0 * n * sum);
}

// The paper-style three-column table: id, H(y) in percent, n(y).
inline std::vector<std::string> format_histogram(const PrototypeHistogram& h) {
    std::vector<std::string> lines;
    lines.push_back("train_id,h_percent,n");
    for (const auto& r : h.rows)
        lines.push_back(std::to_string(r.train_id) + "," + format_percent(r.fraction) +
                        "," + std::to_string(r.count));
    return lines;
}

} // namespace coindex
