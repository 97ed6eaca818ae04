#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "coindex/bitvec.hpp"
#include "coindex/errors.hpp"

namespace coindex {

enum class SimilarityKind { coincidence, kappa_bits, cosine };
enum class AggregatorKind { max, min };

inline const char* to_string(SimilarityKind k) {
    switch (k) {
    case SimilarityKind::coincidence: return "coincidence";
    case SimilarityKind::kappa_bits: return "kappa";
    case SimilarityKind::cosine: return "cosine";
    }
    return "?";
}

inline const char* to_string(AggregatorKind k) {
    return k == AggregatorKind::max ? "max" : "min";
}

inline SimilarityKind similarity_from_string(const std::string& s) {
    if (s == "coincidence") return SimilarityKind::coincidence;
    if (s == "kappa") return SimilarityKind::kappa_bits;
    if (s == "cosine") return SimilarityKind::cosine;
    throw ConfigError("unknown similarity: " + s);
}

inline AggregatorKind aggregator_from_string(const std::string& s) {
    if (s == "max") return AggregatorKind::max;
    if (s == "min") return AggregatorKind::min;
    throw ConfigError("unknown aggregator: " + s);
}

// Fraction of x's excesses that are also excesses of y. Asymmetric: the
// denominator is the weight of the first argument. 0 when x has no excesses.
inline double coincidence(const IncidenceVector& x, const IncidenceVector& y) {
    const size_t hx = x.weight();
    if (hx == 0) return 0.0;
    return static_cast<double>(and_weight(x, y)) / static_cast<double>(hx);
}

// Chance-corrected bit agreement of x and y read as two binary raters:
// (accu - p_e)/(1 - p_e) with p_e from the marginal one/zero counts.
// p_e = 1 only when both vectors are constant of the same class; that 0/0
// is defined as 1 for equal vectors (identical raters) and 0 otherwise.
inline double kappa_bits(const IncidenceVector& x, const IncidenceVector& y) {
    const size_t s = x.size();
    if (s != y.size())
        throw DataError("incidence vector length mismatch");
    if (s == 0)
        throw DataError("kappa of empty vectors");
    const double n = static_cast<double>(s);
    const double matches = n - static_cast<double>(xor_weight(x, y));
    const double x1 = static_cast<double>(x.weight()), x0 = n - x1;
    const double y1 = static_cast<double>(y.weight()), y0 = n - y1;
    const double pe = (x0 * y0 + x1 * y1) / (n * n);
    if (pe == 1.0)
        return x == y ? 1.0 : 0.0;
    return (matches / n - pe) / (1.0 - pe);
}

// H(x AND y) / sqrt(H(x) H(y)); 0 when either weight is 0.
inline double cosine(const IncidenceVector& x, const IncidenceVector& y) {
    const size_t hx = x.weight(), hy = y.weight();
    if (hx == 0 || hy == 0) return 0.0;
    return static_cast<double>(and_weight(x, y)) /
           std::sqrt(static_cast<double>(hx) * static_cast<double>(hy));
}

inline double similarity(const IncidenceVector& x, const IncidenceVector& y,
                         SimilarityKind kind) {
    switch (kind) {
    case SimilarityKind::coincidence: return coincidence(x, y);
    case SimilarityKind::kappa_bits: return kappa_bits(x, y);
    case SimilarityKind::cosine: return cosine(x, y);
    }
    return 0.0;
}

struct SetScore {
    double value = 0.0;
    size_t witness = 0; // index into T of the first element attaining value
};

// max/min of f(x, y) over y in T. Ties keep the first index in T order,
// which makes downstream prototype histograms deterministic.
inline SetScore s_to_set(const IncidenceVector& x,
                         std::span<const IncidenceVector> training,
                         SimilarityKind kind, AggregatorKind agg) {
    if (training.empty())
        throw DataError("empty training set");
    SetScore best{similarity(x, training[0], kind), 0};
    for (size_t k = 1; k < training.size(); ++k) {
        const double v = similarity(x, training[k], kind);
        const bool better = agg == AggregatorKind::max ? v > best.value : v < best.value;
        if (better)
            best = {v, k};
    }
    return best;
}

// Complemented indicator: maximum over T2 of H(~x AND ~y)/H(~x), i.e. the
// coincidence index of the two complement patterns. 0 when x is all-ones.
inline SetScore s2_to_set(const IncidenceVector& x,
                          std::span<const IncidenceVector> training) {
    if (training.empty())
        throw DataError("empty training set");
    const size_t s = x.size();
    const size_t hxc = s - x.weight();
    if (hxc == 0) {
        or_weight(x, training[0]); // still validate lengths
        return {0.0, 0};
    }
    // H(~x & ~y) = s - H(x | y)
    auto comp_coincidence = [&](const IncidenceVector& y) {
        return static_cast<double>(s - or_weight(x, y)) / static_cast<double>(hxc);
    };
    SetScore best{comp_coincidence(training[0]), 0};
    for (size_t k = 1; k < training.size(); ++k) {
        const double v = comp_coincidence(training[k]);
        if (v > best.value)
            best = {v, k};
    }
    return best;
}

} // namespace coindex
