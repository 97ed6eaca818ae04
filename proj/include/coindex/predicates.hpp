#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "coindex/bitvec.hpp"
#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"

namespace coindex {

enum class PredicateKind {
    t_excess,     // bit i set iff x[i] - t > 0
    abs_t_excess, // bit i set iff |x[i]| - t > 0
    ref_excess,   // bit i set iff x[i] < lo[i] or x[i] > hi[i]
};

inline const char* to_string(PredicateKind k) {
    switch (k) {
    case PredicateKind::t_excess: return "t_excess";
    case PredicateKind::abs_t_excess: return "abs_t_excess";
    case PredicateKind::ref_excess: return "ref_excess";
    }
    return "?";
}

inline PredicateKind predicate_kind_from_string(const std::string& s) {
    if (s == "t" || s == "t_excess") return PredicateKind::t_excess;
    if (s == "abs" || s == "abs_t_excess") return PredicateKind::abs_t_excess;
    if (s == "ref" || s == "ref_excess") return PredicateKind::ref_excess;
    throw ConfigError("unknown predicate kind: " + s);
}

// One predicate per measurement column; the incidence vector therefore has
// exactly n bits. Other predicate families can be mixed in by producing
// IncidenceVectors of their own and feeding them to the similarity layer.
struct PredicateConfig {
    PredicateKind kind = PredicateKind::abs_t_excess;
    double t = 0.5;          // used by the two t-families
    std::vector<double> lo;  // ref_excess bounds, size n
    std::vector<double> hi;

    void check(size_t n) const {
        if (kind == PredicateKind::ref_excess) {
            if (lo.size() != n || hi.size() != n)
                throw DataError("ref_excess bounds dimension mismatch");
            for (size_t j = 0; j < n; ++j)
                if (!(lo[j] <= hi[j]))
                    throw ConfigError("ref_excess requires lo <= hi per column");
        } else {
            if (!(t > 0.0))
                throw ConfigError("threshold t must be positive");
        }
    }
};

// Strict inequalities throughout: a coordinate sitting exactly on the
// threshold or range edge is not an excess.
inline IncidenceVector encode(std::span<const double> row, const PredicateConfig& cfg) {
    cfg.check(row.size());
    IncidenceVector v(row.size());
    switch (cfg.kind) {
    case PredicateKind::t_excess:
        for (size_t i = 0; i < row.size(); ++i)
            if (row[i] - cfg.t > 0.0) v.set(i);
        break;
    case PredicateKind::abs_t_excess:
        for (size_t i = 0; i < row.size(); ++i)
            if (std::abs(row[i]) - cfg.t > 0.0) v.set(i);
        break;
    case PredicateKind::ref_excess:
        for (size_t i = 0; i < row.size(); ++i)
            if (row[i] < cfg.lo[i] || row[i] > cfg.hi[i]) v.set(i);
        break;
    }
    return v;
}

inline std::vector<IncidenceVector> encode_dataset(const Dataset& d,
                                                   const PredicateConfig& cfg) {
    cfg.check(d.cols());
    std::vector<IncidenceVector> out;
    out.reserve(d.rows());
    for (size_t i = 0; i < d.rows(); ++i)
        out.push_back(encode(std::span<const double>(d.values.data() + i * d.cols(), d.cols()), cfg));
    return out;
}

// lo,hi per column, one row per column (optionally with a header)
inline PredicateConfig load_ref_bounds(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    PredicateConfig cfg;
    cfg.kind = PredicateKind::ref_excess;
    for (const auto& r : t.rows) {
        if (r.size() < 2)
            throw DataError("ref bounds file needs lo,hi per row: " + path);
        auto lo = csv::parse_double(r[r.size() - 2]);
        auto hi = csv::parse_double(r[r.size() - 1]);
        if (!lo || !hi)
            throw DataError("bad ref bounds row in " + path);
        cfg.lo.push_back(*lo);
        cfg.hi.push_back(*hi);
    }
    if (cfg.lo.empty())
        throw DataError("empty ref bounds file: " + path);
    return cfg;
}

} // namespace coindex
