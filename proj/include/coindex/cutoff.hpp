#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coindex/errors.hpp"
#include "coindex/metrics.hpp"

namespace coindex {

enum class QualityMetric { accuracy, kappa };

inline const char* to_string(QualityMetric q) {
    return q == QualityMetric::accuracy ? "accuracy" : "kappa";
}

inline QualityMetric quality_from_string(const std::string& s) {
    if (s == "accuracy") return QualityMetric::accuracy;
    if (s == "kappa") return QualityMetric::kappa;
    throw ConfigError("unknown quality metric: " + s);
}

inline double quality(std::span<const uint8_t> pred, std::span<const uint8_t> truth,
                      QualityMetric q) {
    const ConfusionCounts c = confusion(pred, truth);
    if (c.total() == 0)
        throw DataError("quality of empty vectors");
    return q == QualityMetric::accuracy ? c.accuracy() : c.kappa();
}

// Scores of the classified objects together with their true states, both in
// dataset order.
struct ScoreVector {
    std::vector<double> scores;
    std::vector<uint8_t> truth;

    void check() const {
        if (scores.size() != truth.size())
            throw DataError("score/truth length mismatch");
        if (scores.empty())
            throw DataError("empty score vector");
        for (double s : scores)
            if (!std::isfinite(s))
                throw DataError("non-finite score");
    }

    bool both_classes() const {
        bool has0 = false, has1 = false;
        for (uint8_t t : truth) (t ? has1 : has0) = true;
        return has0 && has1;
    }
};

// bit = 1 iff score >= c (non-strict)
inline std::vector<uint8_t> predict(std::span<const double> scores, double c) {
    std::vector<uint8_t> out(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] >= c ? 1 : 0;
    return out;
}

// Better-than-nothing cutoff, assuming av1 - av0 >= 0 (callers invert the
// prediction sense first when it is not).
inline double naive_cutoff(double av1, double av0) {
    return (av1 - av0) / 2.0;
}

// Alternative reading of the same selection: the midpoint between the two
// class averages.
inline double midpoint_cutoff(double av1, double av0) {
    return (av1 + av0) / 2.0;
}

struct CutoffResult {
    double c_opt = 0.0;
    double q_opt = 0.0;
    std::vector<std::pair<double, double>> curve; // every (C, Q) evaluated, in order
    size_t evaluations = 0;
};

using QualityFn = std::function<double(double)>;

// Exhaustive search of Q on the equidistant grid {0, 1/(n-1), ..., 1}.
// Ties go to the smallest C.
inline CutoffResult grid_cutoff_fn(const QualityFn& q_of_c, size_t n_grid) {
    if (n_grid < 2)
        throw ConfigError("grid needs at least 2 points");
    CutoffResult r;
    r.curve.reserve(n_grid);
    for (size_t k = 0; k < n_grid; ++k) {
        const double c = static_cast<double>(k) / static_cast<double>(n_grid - 1);
        const double q = q_of_c(c);
        r.curve.emplace_back(c, q);
        if (k == 0 || q > r.q_opt) {
            r.q_opt = q;
            r.c_opt = c;
        }
    }
    r.evaluations = n_grid;
    return r;
}

struct RefinedOptions {
    size_t n_steps = 10;
    double epsilon = 1e-6;
    size_t max_iterations = 10000;
    // The printed loop guards read "if Q_i < 0 / > 1"; since kappa is
    // legitimately negative and the grid lives in [0,1], the default applies
    // them to the trial cutoff position instead. literal_q_guards restores
    // the printed behavior.
    bool literal_q_guards = false;
    // The printed loop returns the last iterate; the default returns the best
    // (C, Q) seen across the coarse grid and the walk, which dominates it.
    bool return_last_iterate = false;
};

// Two-phase search: a coarse fixed grid to locate the hill, then a
// flexible-step walk (grow 1.5x while Q is non-decreasing, halve and turn
// around when it drops) until the last change of Q falls below epsilon.
// The coarse grid uses cell centers (2k-1)/(2 n_steps), so the best point
// is always within 1/(2 n_steps) of the true optimum of a unimodal curve,
// matching the walk's start interval [t_a, t_b].
inline CutoffResult refined_cutoff_fn(const QualityFn& q_of_c, const RefinedOptions& opt) {
    if (opt.n_steps < 1)
        throw ConfigError("n_steps must be >= 1");
    if (!(opt.epsilon > 0.0))
        throw ConfigError("epsilon must be positive");

    CutoffResult r;
    auto evaluate = [&](double c) {
        const double q = q_of_c(c);
        r.curve.emplace_back(c, q);
        ++r.evaluations;
        return q;
    };

    double coarse_best_c = 0.0, coarse_best_q = 0.0;
    for (size_t k = 1; k <= opt.n_steps; ++k) {
        const double c = (2.0 * static_cast<double>(k) - 1.0) /
                         (2.0 * static_cast<double>(opt.n_steps));
        const double q = evaluate(c);
        if (k == 1 || q > coarse_best_q) {
            coarse_best_q = q;
            coarse_best_c = c;
        }
    }
    double best_c = coarse_best_c, best_q = coarse_best_q;

    const double half = 1.0 / (2.0 * static_cast<double>(opt.n_steps));
    const double ta = std::max(0.0, coarse_best_c - half);
    const double tb = std::min(1.0, coarse_best_c + half);
    double sw = (tb - ta) / 100.0;

    double t_prev = ta, q_prev = evaluate(ta);
    if (q_prev > best_q) { best_q = q_prev; best_c = t_prev; }
    double t_cur = ta + sw, q_cur = evaluate(t_cur);
    if (q_cur > best_q) { best_q = q_cur; best_c = t_cur; }

    for (size_t iter = 0; iter < opt.max_iterations; ++iter) {
        if (std::abs(q_cur - q_prev) < opt.epsilon)
            break;
        if (opt.literal_q_guards) {
            if (q_cur < 0.0) sw = std::abs(sw) * 2.0;
            if (q_cur > 1.0) sw = -std::abs(sw) * 2.0;
        } else {
            if (t_cur < 0.0) sw = std::abs(sw) * 2.0;
            if (t_cur > 1.0) sw = -std::abs(sw) * 2.0;
        }
        if (q_cur >= q_prev)
            sw = 1.5 * sw;
        else
            sw = -sw / 2.0;
        const double t_next = t_cur + sw;
        const double q_next = evaluate(t_next);
        if (q_next > best_q) { best_q = q_next; best_c = t_next; }
        t_prev = t_cur; q_prev = q_cur;
        t_cur = t_next; q_cur = q_next;
    }

    if (opt.return_last_iterate) {
        r.c_opt = t_cur;
        r.q_opt = q_cur;
    } else {
        r.c_opt = best_c;
        r.q_opt = best_q;
    }
    return r;
}

namespace detail {

inline QualityFn make_quality_fn(const ScoreVector& sv, QualityMetric q, bool inverted) {
    sv.check();
    if (q == QualityMetric::kappa && !sv.both_classes())
        throw DataError("kappa cutoff optimization needs both truth classes");
    return [&sv, q, inverted](double c) {
        std::vector<uint8_t> pred = predict(sv.scores, c);
        if (inverted)
            for (auto& p : pred) p = p ? 0 : 1;
        return quality(pred, sv.truth, q);
    };
}

} // namespace detail

inline CutoffResult grid_cutoff(const ScoreVector& sv, QualityMetric q, size_t n_grid,
                                bool inverted = false) {
    return grid_cutoff_fn(detail::make_quality_fn(sv, q, inverted), n_grid);
}

inline CutoffResult refined_cutoff(const ScoreVector& sv, QualityMetric q,
                                   const RefinedOptions& opt, bool inverted = false) {
    return refined_cutoff_fn(detail::make_quality_fn(sv, q, inverted), opt);
}

} // namespace coindex
