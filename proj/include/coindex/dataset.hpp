#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/errors.hpp"

namespace coindex {

// Labeled measurement matrix. Row-major m x n, one binary state and one
// unique non-negative id per row.
struct Dataset {
    std::vector<std::string> column_names; // n entries
    std::vector<double> values;            // row-major, m*n
    std::vector<uint8_t> labels;           // m entries, each 0 or 1
    std::vector<int64_t> ids;              // m entries, unique, >= 0

    size_t rows() const { return labels.size(); }
    size_t cols() const { return column_names.size(); }

    double at(size_t i, size_t j) const { return values[i * cols() + j]; }
    double& at(size_t i, size_t j) { return values[i * cols() + j]; }

    size_t positive_count() const {
        size_t c = 0;
        for (uint8_t l : labels) c += l;
        return c;
    }
};

inline void validate(const Dataset& d) {
    const size_t m = d.rows(), n = d.cols();
    if (d.values.size() != m * n)
        throw DataError("dataset shape mismatch: values != m*n");
    if (d.ids.size() != m)
        throw DataError("dataset shape mismatch: ids != m");
    for (double v : d.values)
        if (!std::isfinite(v))
            throw DataError("dataset contains a non-finite value");
    for (uint8_t l : d.labels)
        if (l != 0 && l != 1)
            throw DataError("label not binary");
    std::unordered_set<int64_t> seen;
    for (int64_t id : d.ids) {
        if (id < 0) throw DataError("negative object id");
        if (!seen.insert(id).second)
            throw DataError("duplicate object id: " + std::to_string(id));
    }
}

// Which measurement columns to keep; indices refer to the measurement
// matrix (0-based), not to raw file columns.
struct ColumnSelection {
    enum class Kind { all, range, list };
    Kind kind = Kind::all;
    size_t first = 0, last = 0;      // inclusive, for Kind::range
    std::vector<size_t> indices;     // for Kind::list, in requested order

    static ColumnSelection all_columns() { return {}; }
    static ColumnSelection range(size_t first, size_t last) {
        ColumnSelection s;
        s.kind = Kind::range;
        s.first = first;
        s.last = last;
        return s;
    }
    static ColumnSelection list(std::vector<size_t> idx) {
        ColumnSelection s;
        s.kind = Kind::list;
        s.indices = std::move(idx);
        return s;
    }

    // "all" | "a..b" | comma-separated indices
    static ColumnSelection parse(const std::string& spec) {
        if (spec.empty() || spec == "all") return all_columns();
        auto dots = spec.find("..");
        if (dots != std::string::npos) {
            auto a = csv::parse_int(spec.substr(0, dots));
            auto b = csv::parse_int(spec.substr(dots + 2));
            if (!a || !b || *a < 0 || *b < *a)
                throw ConfigError("bad column range: " + spec);
            return range(static_cast<size_t>(*a), static_cast<size_t>(*b));
        }
        std::vector<size_t> idx;
        for (const auto& f : csv::split(spec, ',')) {
            auto v = csv::parse_int(f);
            if (!v || *v < 0)
                throw ConfigError("bad column index: " + f);
            idx.push_back(static_cast<size_t>(*v));
        }
        if (idx.empty())
            throw ConfigError("empty column list");
        return list(std::move(idx));
    }

    std::vector<size_t> resolve(size_t n) const {
        std::vector<size_t> out;
        switch (kind) {
        case Kind::all:
            out.resize(n);
            for (size_t j = 0; j < n; ++j) out[j] = j;
            break;
        case Kind::range:
            if (last >= n)
                throw DataError("column range out of bounds");
            for (size_t j = first; j <= last; ++j) out.push_back(j);
            break;
        case Kind::list:
            for (size_t j : indices) {
                if (j >= n)
                    throw DataError("column index out of bounds: " + std::to_string(j));
                out.push_back(j);
            }
            break;
        }
        return out;
    }
};

inline Dataset select_columns(const Dataset& d, const ColumnSelection& sel) {
    const auto keep = sel.resolve(d.cols());
    Dataset out;
    out.labels = d.labels;
    out.ids = d.ids;
    out.column_names.reserve(keep.size());
    for (size_t j : keep) out.column_names.push_back(d.column_names[j]);
    out.values.resize(d.rows() * keep.size());
    for (size_t i = 0; i < d.rows(); ++i)
        for (size_t k = 0; k < keep.size(); ++k)
            out.values[i * keep.size() + k] = d.at(i, keep[k]);
    return out;
}

namespace detail {

// Resolves a name-or-index column reference against a table.
inline size_t resolve_column(const csv::Table& t, const std::string& ref,
                             const char* what) {
    if (t.has_header) {
        for (size_t j = 0; j < t.header.size(); ++j)
            if (t.header[j] == ref) return j;
    }
    auto idx = csv::parse_int(ref);
    size_t width = t.has_header ? t.header.size()
                                : (t.rows.empty() ? 0 : t.rows[0].size());
    if (idx && *idx >= 0 && static_cast<size_t>(*idx) < width)
        return static_cast<size_t>(*idx);
    throw DataError(std::string("cannot resolve ") + what + " column: " + ref);
}

} // namespace detail

// Loads a delimited numeric file. label_column is required and must hold
// exactly 0/1; id_column is optional (missing => ids 0..m-1). All rows
// with bad measurement cells are collected and reported in one error.
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        const std::optional<std::string>& id_column = std::nullopt) {
    const csv::Table t = csv::read_table(path);
    const size_t width = t.has_header ? t.header.size()
                                      : (t.rows.empty() ? 0 : t.rows[0].size());
    if (width == 0)
        throw DataError("no columns in file: " + path);

    const size_t label_idx = detail::resolve_column(t, label_column, "label");
    std::optional<size_t> id_idx;
    if (id_column)
        id_idx = detail::resolve_column(t, *id_column, "id");
    if (id_idx && *id_idx == label_idx)
        throw DataError("label and id refer to the same column");

    std::vector<size_t> feature_cols;
    for (size_t j = 0; j < width; ++j)
        if (j != label_idx && (!id_idx || j != *id_idx))
            feature_cols.push_back(j);

    Dataset d;
    for (size_t j : feature_cols)
        d.column_names.push_back(t.has_header ? t.header[j]
                                              : "c" + std::to_string(j));

    std::vector<std::string> bad;
    auto complain = [&bad](size_t row, const std::string& msg) {
        if (bad.size() < 20)
            bad.push_back("row " + std::to_string(row) + ": " + msg);
        else if (bad.size() == 20)
            bad.push_back("...");
    };

    const size_t m = t.rows.size();
    d.values.reserve(m * feature_cols.size());
    d.labels.reserve(m);
    d.ids.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        const auto& r = t.rows[i];
        if (r.size() != width) {
            complain(i, "expected " + std::to_string(width) + " fields, got " +
                            std::to_string(r.size()));
            continue;
        }
        auto lab = csv::parse_double(r[label_idx]);
        if (!lab) {
            complain(i, "label not numeric: '" + r[label_idx] + "'");
        } else if (*lab != 0.0 && *lab != 1.0) {
            complain(i, "label not binary: '" + r[label_idx] + "'");
        }
        if (id_idx) {
            auto id = csv::parse_int(r[*id_idx]);
            if (!id || *id < 0)
                complain(i, "bad id: '" + r[*id_idx] + "'");
            else
                d.ids.push_back(*id);
        } else {
            d.ids.push_back(static_cast<int64_t>(i));
        }
        for (size_t k = 0; k < feature_cols.size(); ++k) {
            auto v = csv::parse_double(r[feature_cols[k]]);
            if (!v || !std::isfinite(*v)) {
                complain(i, "bad measurement in column '" + d.column_names[k] +
                                "': '" + r[feature_cols[k]] + "'");
                break;
            }
            d.values.push_back(*v);
        }
        if (lab && (*lab == 0.0 || *lab == 1.0))
            d.labels.push_back(static_cast<uint8_t>(*lab));
    }

    if (!bad.empty()) {
        std::string msg = "rejected " + path + ":";
        for (const auto& b : bad) msg += "\n  " + b;
        throw DataError(msg);
    }
    validate(d);
    return d;
}

// For scoring data whose true states are unknown: every non-id column is a
// measurement and all labels are 0.
inline Dataset load_csv_unlabeled(const std::string& path,
                                  const std::optional<std::string>& id_column = std::nullopt) {
    const csv::Table t = csv::read_table(path);
    const size_t width = t.has_header ? t.header.size()
                                      : (t.rows.empty() ? 0 : t.rows[0].size());
    if (width == 0)
        throw DataError("no columns in file: " + path);
    std::optional<size_t> id_idx;
    if (id_column)
        id_idx = detail::resolve_column(t, *id_column, "id");

    Dataset d;
    for (size_t j = 0; j < width; ++j)
        if (!id_idx || j != *id_idx)
            d.column_names.push_back(t.has_header ? t.header[j] : "c" + std::to_string(j));

    std::vector<std::string> bad;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (r.size() != width) {
            if (bad.size() < 20)
                bad.push_back("row " + std::to_string(i) + ": field count mismatch");
            continue;
        }
        if (id_idx) {
            auto id = csv::parse_int(r[*id_idx]);
            if (!id || *id < 0) {
                if (bad.size() < 20)
                    bad.push_back("row " + std::to_string(i) + ": bad id '" + r[*id_idx] + "'");
                continue;
            }
            d.ids.push_back(*id);
        } else {
            d.ids.push_back(static_cast<int64_t>(i));
        }
        for (size_t j = 0; j < width; ++j) {
            if (id_idx && j == *id_idx) continue;
            auto v = csv::parse_double(r[j]);
            if (!v || !std::isfinite(*v)) {
                if (bad.size() < 20)
                    bad.push_back("row " + std::to_string(i) + ": bad measurement '" + r[j] + "'");
                break;
            }
            d.values.push_back(*v);
        }
        d.labels.push_back(0);
    }
    if (!bad.empty()) {
        std::string msg = "rejected " + path + ":";
        for (const auto& b : bad) msg += "\n  " + b;
        throw DataError(msg);
    }
    validate(d);
    return d;
}

inline void write_csv(const Dataset& d, const std::string& path) {
    std::vector<std::string> lines;
    lines.reserve(d.rows() + 1);
    std::string header = "id,label";
    for (const auto& c : d.column_names) header += "," + c;
    lines.push_back(std::move(header));
    for (size_t i = 0; i < d.rows(); ++i) {
        std::string line = std::to_string(d.ids[i]) + "," + std::to_string(int(d.labels[i]));
        for (size_t j = 0; j < d.cols(); ++j)
            line += "," + csv::format_double(d.at(i, j));
        lines.push_back(std::move(line));
    }
    csv::write_lines(path, lines);
}

} // namespace coindex
