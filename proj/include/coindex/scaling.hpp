#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"

namespace coindex {

// Per-column z-score parameters. sigma is the population standard
// deviation (divide by m), which stays defined for m = 1.
struct ScalingParams {
    std::vector<double> mu;
    std::vector<double> sigma;

    size_t cols() const { return mu.size(); }
};

inline ScalingParams fit_scaling(const Dataset& d) {
    const size_t m = d.rows(), n = d.cols();
    if (m == 0)
        throw DataError("cannot fit scaling on an empty dataset");
    ScalingParams s;
    s.mu.assign(n, 0.0);
    s.sigma.assign(n, 0.0);
    // fixed summation order: sequential in row index per column
    for (size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (size_t i = 0; i < m; ++i) sum += d.at(i, j);
        const double mu = sum / static_cast<double>(m);
        double sq = 0.0;
        for (size_t i = 0; i < m; ++i) {
            const double dx = d.at(i, j) - mu;
            sq += dx * dx;
        }
        s.mu[j] = mu;
        s.sigma[j] = std::sqrt(sq / static_cast<double>(m));
    }
    return s;
}

// x := (x - mu)/sigma per cell, or 0 where sigma = 0. Labels and ids pass
// through untouched.
inline Dataset apply_scaling(const Dataset& d, const ScalingParams& s) {
    if (s.cols() != d.cols())
        throw DataError("scaling dimension mismatch: params for " +
                        std::to_string(s.cols()) + " columns, data has " +
                        std::to_string(d.cols()));
    Dataset out = d;
    const size_t m = d.rows(), n = d.cols();
    for (size_t j = 0; j < n; ++j) {
        const double mu = s.mu[j], sigma = s.sigma[j];
        if (sigma == 0.0) {
            for (size_t i = 0; i < m; ++i) out.at(i, j) = 0.0;
        } else {
            for (size_t i = 0; i < m; ++i) out.at(i, j) = (d.at(i, j) - mu) / sigma;
        }
    }
    return out;
}

inline void save_scaling(const ScalingParams& s, const std::vector<std::string>& names,
                         const std::string& path) {
    std::vector<std::string> lines;
    lines.push_back("column,mu,sigma");
    for (size_t j = 0; j < s.cols(); ++j) {
        const std::string name = j < names.size() ? names[j] : "c" + std::to_string(j);
        lines.push_back(name + "," + csv::format_double(s.mu[j]) + "," +
                        csv::format_double(s.sigma[j]));
    }
    csv::write_lines(path, lines);
}

inline ScalingParams load_scaling(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    ScalingParams s;
    for (const auto& r : t.rows) {
        if (r.size() != 3)
            throw DataError("bad scaling file row in " + path);
        auto mu = csv::parse_double(r[1]);
        auto sigma = csv::parse_double(r[2]);
        if (!mu || !sigma || *sigma < 0.0)
            throw DataError("bad scaling values in " + path);
        s.mu.push_back(*mu);
        s.sigma.push_back(*sigma);
    }
    if (s.mu.empty())
        throw DataError("empty scaling file: " + path);
    return s;
}

} // namespace coindex
