#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "coindex/errors.hpp"

namespace coindex {

struct ConfusionCounts {
    uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

    uint64_t total() const { return tp + fp + tn + fn; }

    double accuracy() const {
        if (total() == 0)
            throw DataError("accuracy of empty confusion matrix");
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }

    // Cohen's kappa of prediction vs truth from the marginal counts.
    // p_e = 1 (both raters constant, same class) is taken as perfect
    // agreement 1; it can only occur with tp or tn equal to the total.
    double kappa() const {
        const double n = static_cast<double>(total());
        if (n == 0.0)
            throw DataError("kappa of empty confusion matrix");
        const double pred1 = static_cast<double>(tp + fp);
        const double truth1 = static_cast<double>(tp + fn);
        const double pe = ((n - pred1) * (n - truth1) + pred1 * truth1) / (n * n);
        if (pe == 1.0)
            return fp + fn == 0 ? 1.0 : 0.0;
        const double accu = static_cast<double>(tp + tn) / n;
        return (accu - pe) / (1.0 - pe);
    }

    // reported as +infinity when FP = 0
    double tp_fp_ratio() const {
        if (fp == 0)
            return std::numeric_limits<double>::infinity();
        return static_cast<double>(tp) / static_cast<double>(fp);
    }
};

inline ConfusionCounts confusion(std::span<const uint8_t> pred,
                                 std::span<const uint8_t> truth) {
    if (pred.size() != truth.size())
        throw DataError("prediction/truth length mismatch");
    ConfusionCounts c;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (truth[i]) {
            pred[i] ? ++c.tp : ++c.fn;
        } else {
            pred[i] ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

// Quotient display with one decimal, half away from zero; infinity as "inf".
inline std::string format_ratio(double r) {
    if (std::isinf(r)) return "inf";
    if (std::isnan(r)) return "nan";
    const double scaled = std::round(r * 10.0);
    const long long whole = static_cast<long long>(scaled) / 10;
    const long long tenth = std::llabs(static_cast<long long>(scaled)) % 10;
    std::string sign = (scaled < 0 && whole == 0) ? "-" : "";
    return sign + std::to_string(whole) + "." + std::to_string(tenth);
}

// Percentage with two decimals, as used by the histogram tables.
inline std::string format_percent(double fraction) {
    const double scaled = std::round(fraction * 10000.0);
    const long long v = static_cast<long long>(scaled);
    std::string whole = std::to_string(v / 100);
    std::string frac = std::to_string(std::llabs(v) % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return whole + "." + frac;
}

} // namespace coindex
