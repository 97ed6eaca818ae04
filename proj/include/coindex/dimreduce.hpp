#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"

namespace coindex {

// Column-elimination plan: a column survives iff at least `sharpness`
// positive rows attain their maximum absolute scaled value there (row
// maxima keep all ties).
struct ReductionPlan {
    std::vector<size_t> kept_columns; // ascending original indices
    std::vector<uint64_t> num_occu;   // per original column
    uint64_t sharpness = 0;
    bool input_looks_unscaled = false;
};

// Expects column-wise auto-scaled input; a matrix that does not look scaled
// (column mean away from 0, or sigma away from both 0 and 1) only sets the
// warning flag. One linear pass over the positive rows.
inline ReductionPlan plan_reduction(const Dataset& d, uint64_t sharpness) {
    const size_t m = d.rows(), n = d.cols();
    if (n == 0)
        throw DataError("dataset has no measurement columns");
    size_t positives = 0;
    for (uint8_t l : d.labels) positives += l;
    if (positives == 0)
        throw DataError("no positive rows to plan a reduction from");

    ReductionPlan plan;
    plan.sharpness = sharpness;
    plan.num_occu.assign(n, 0);

    for (size_t j = 0; j < n && !plan.input_looks_unscaled; ++j) {
        double sum = 0.0;
        for (size_t i = 0; i < m; ++i) sum += d.at(i, j);
        const double mu = sum / static_cast<double>(m);
        double sq = 0.0;
        for (size_t i = 0; i < m; ++i) {
            const double dx = d.at(i, j) - mu;
            sq += dx * dx;
        }
        const double sigma = std::sqrt(sq / static_cast<double>(m));
        if (std::abs(mu) > 1e-6 || (std::abs(sigma) > 1e-6 && std::abs(sigma - 1.0) > 1e-6))
            plan.input_looks_unscaled = true;
    }

    for (size_t i = 0; i < m; ++i) {
        if (!d.labels[i]) continue;
        double rowmax = 0.0;
        for (size_t j = 0; j < n; ++j)
            rowmax = std::max(rowmax, std::abs(d.at(i, j)));
        for (size_t j = 0; j < n; ++j)
            if (std::abs(d.at(i, j)) == rowmax) ++plan.num_occu[j];
    }

    for (size_t j = 0; j < n; ++j)
        if (plan.num_occu[j] >= sharpness) plan.kept_columns.push_back(j);
    return plan;
}

// Copies the kept columns in their original relative order; rows, labels
// and ids pass through. An empty plan yields an n = 0 dataset, which the
// training pipeline rejects.
inline Dataset apply_reduction(const Dataset& d, const ReductionPlan& plan) {
    if (plan.num_occu.size() != d.cols())
        throw DataError("reduction plan dimension mismatch");
    ColumnSelection sel = ColumnSelection::list(plan.kept_columns);
    if (plan.kept_columns.empty()) {
        Dataset out;
        out.labels = d.labels;
        out.ids = d.ids;
        return out;
    }
    return select_columns(d, sel);
}

inline void save_plan(const ReductionPlan& plan, const std::string& path) {
    std::vector<std::string> lines;
    lines.push_back("column,num_occu,kept");
    std::vector<bool> kept(plan.num_occu.size(), false);
    for (size_t j : plan.kept_columns) kept[j] = true;
    for (size_t j = 0; j < plan.num_occu.size(); ++j)
        lines.push_back(std::to_string(j) + "," + std::to_string(plan.num_occu[j]) + "," +
                        (kept[j] ? "1" : "0"));
    csv::write_lines(path, lines);
}

} // namespace coindex
