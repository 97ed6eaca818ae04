#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <unordered_set>
#include <vector>

#include "coindex/cutoff.hpp"
#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"
#include "coindex/metrics.hpp"
#include "coindex/predicates.hpp"
#include "coindex/rng.hpp"
#include "coindex/scaling.hpp"
#include "coindex/similarity.hpp"

namespace coindex {

enum class CutoffStrategy { naive, grid, refined };

inline const char* to_string(CutoffStrategy s) {
    switch (s) {
    case CutoffStrategy::naive: return "naive";
    case CutoffStrategy::grid: return "grid";
    case CutoffStrategy::refined: return "refined";
    }
    return "?";
}

inline CutoffStrategy cutoff_strategy_from_string(const std::string& s) {
    if (s == "naive") return CutoffStrategy::naive;
    if (s == "grid") return CutoffStrategy::grid;
    if (s == "refined") return CutoffStrategy::refined;
    throw ConfigError("unknown cutoff strategy: " + s);
}

struct RunConfig {
    double train_percent = 2.0; // p, percentage of the positive objects
    uint64_t seed = 1;
    PredicateConfig predicate;
    SimilarityKind similarity = SimilarityKind::coincidence;
    AggregatorKind aggregator = AggregatorKind::max;
    CutoffStrategy cutoff_strategy = CutoffStrategy::grid;
    QualityMetric q_metric = QualityMetric::kappa;
    size_t grid_points = 101;
    RefinedOptions refined;
    bool naive_midpoint = false; // use (av1+av0)/2 instead of (av1-av0)/2
    size_t threads = 0;          // 0 = hardware concurrency

    void check() const {
        if (!(train_percent > 0.0) || train_percent > 100.0)
            throw ConfigError("training percentage must be in (0, 100]");
        if (grid_points < 2)
            throw ConfigError("grid needs at least 2 points");
    }
};

struct TrainedModel {
    ScalingParams scaling;
    PredicateConfig predicate;
    SimilarityKind similarity = SimilarityKind::coincidence;
    AggregatorKind aggregator = AggregatorKind::max;
    std::vector<std::string> column_names;
    std::vector<int64_t> train_ids;             // dataset order of the fitting set
    std::vector<IncidenceVector> train_vectors; // same order as train_ids
    double cutoff = 0.0;
    bool inverted = false; // prediction sense flipped because av1 < av0
    double av0 = 0.0, av1 = 0.0;
};

struct ObjectResult {
    int64_t id = 0;
    double score = 0.0;
    uint8_t prediction = 0;
    uint8_t truth = 0;
    size_t witness = 0; // index into train_ids attaining the aggregate score
};

struct RunReport {
    std::vector<ObjectResult> objects; // everything outside the training set
    ConfusionCounts confusion;
    double accuracy = 0.0;
    double kappa = 0.0;
    double tp_fp_ratio = 0.0;
    double av0 = 0.0, av1 = 0.0;   // class mean scores on the classified objects
    double q_avg_ratio = 0.0;       // av1 / av0
    bool inverted = false;
    double seconds_scoring = 0.0;
    double objects_per_second = 0.0;
};

namespace detail {

template <typename Fn>
void parallel_for(size_t n, size_t threads, Fn&& fn) {
    if (threads == 0)
        threads = std::max<size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const size_t chunk = (n + threads - 1) / threads;
    for (size_t t = 0; t < threads; ++t) {
        const size_t lo = t * chunk;
        const size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline double mean_or_zero(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

// Draws ceil(|D1| * p / 100) distinct positive ids: positives enumerated in
// dataset order, seeded shuffle, first k taken, result reported back in
// dataset order. Identical (dataset order, p, seed) gives the identical set
// on every platform.
inline std::vector<int64_t> select_training(const Dataset& d, double percent,
                                            uint64_t seed) {
    if (!(percent > 0.0) || percent > 100.0)
        throw ConfigError("training percentage must be in (0, 100]");
    std::vector<size_t> positive_rows;
    for (size_t i = 0; i < d.rows(); ++i)
        if (d.labels[i]) positive_rows.push_back(i);
    if (positive_rows.empty())
        throw DataError("no positive objects to train on");
    const size_t k = static_cast<size_t>(
        std::ceil(static_cast<double>(positive_rows.size()) * percent / 100.0));
    SplitMix64 rng(seed);
    shuffle(positive_rows, rng);
    positive_rows.resize(std::min(k, positive_rows.size()));
    std::sort(positive_rows.begin(), positive_rows.end());
    std::vector<int64_t> ids;
    ids.reserve(positive_rows.size());
    for (size_t i : positive_rows) ids.push_back(d.ids[i]);
    return ids;
}

namespace detail {

struct ScoredSet {
    std::vector<size_t> rows;      // rows of d outside the training set
    std::vector<double> scores;
    std::vector<size_t> witnesses; // train-vector index per scored row
    std::vector<uint8_t> truth;
    double seconds = 0.0;
};

// Scores every object outside the training set. The loop over objects is
// data-parallel; each worker writes its own slots, so the result does not
// depend on the thread count.
inline ScoredSet score_outside_training(const Dataset& d,
                                        const std::vector<IncidenceVector>& encoded,
                                        const TrainedModel& model, size_t threads) {
    if (model.train_vectors.empty())
        throw DataError("model has no training vectors");
    std::unordered_set<int64_t> train_set(model.train_ids.begin(), model.train_ids.end());
    ScoredSet s;
    for (size_t i = 0; i < d.rows(); ++i)
        if (!train_set.count(d.ids[i])) s.rows.push_back(i);
    s.scores.resize(s.rows.size());
    s.witnesses.resize(s.rows.size());
    s.truth.resize(s.rows.size());
    const auto t0 = std::chrono::steady_clock::now();
    std::span<const IncidenceVector> train(model.train_vectors);
    parallel_for(s.rows.size(), threads, [&](size_t k) {
        const size_t row = s.rows[k];
        const SetScore sc = s_to_set(encoded[row], train, model.similarity, model.aggregator);
        s.scores[k] = sc.value;
        s.witnesses[k] = sc.witness;
        s.truth[k] = d.labels[row];
    });
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

} // namespace detail

struct TrainOutcome {
    TrainedModel model;
    CutoffResult cutoff_search;  // curve of the grid/refined search (empty for naive)
    ScoreVector training_scores; // scores of D \ T at training time
};

// Full training pass: scale on all of D, draw T from the positives, score
// everything outside T, derive the class averages and the cutoff. When the
// positive mean ends up below the negative mean the prediction sense is
// inverted and flagged; that usually indicates an insufficient training set.
inline TrainOutcome train(const Dataset& d, const RunConfig& cfg) {
    cfg.check();
    validate(d);
    if (d.cols() == 0)
        throw DataError("dataset has no measurement columns");

    TrainOutcome out;
    TrainedModel& model = out.model;
    model.scaling = fit_scaling(d);
    model.predicate = cfg.predicate;
    model.similarity = cfg.similarity;
    model.aggregator = cfg.aggregator;
    model.column_names = d.column_names;

    const Dataset ds = apply_scaling(d, model.scaling);
    const std::vector<IncidenceVector> encoded = encode_dataset(ds, cfg.predicate);

    model.train_ids = select_training(d, cfg.train_percent, cfg.seed);
    std::unordered_set<int64_t> train_set(model.train_ids.begin(), model.train_ids.end());
    model.train_vectors.reserve(model.train_ids.size());
    for (size_t i = 0; i < d.rows(); ++i)
        if (train_set.count(d.ids[i])) model.train_vectors.push_back(encoded[i]);

    const detail::ScoredSet scored =
        detail::score_outside_training(d, encoded, model, cfg.threads);
    if (scored.rows.empty())
        throw DataError("no objects left outside the training set");

    // class averages; an absent class contributes an average of 0
    std::vector<double> pos, neg;
    for (size_t k = 0; k < scored.rows.size(); ++k)
        (scored.truth[k] ? pos : neg).push_back(scored.scores[k]);
    model.av1 = detail::mean_or_zero(pos);
    model.av0 = detail::mean_or_zero(neg);
    model.inverted = model.av1 - model.av0 < 0.0;

    out.training_scores.scores = scored.scores;
    out.training_scores.truth = scored.truth;

    switch (cfg.cutoff_strategy) {
    case CutoffStrategy::naive:
        model.cutoff = cfg.naive_midpoint
                           ? midpoint_cutoff(model.av1, model.av0)
                           : naive_cutoff(std::max(model.av1, model.av0),
                                          std::min(model.av1, model.av0));
        break;
    case CutoffStrategy::grid:
        out.cutoff_search =
            grid_cutoff(out.training_scores, cfg.q_metric, cfg.grid_points, model.inverted);
        model.cutoff = out.cutoff_search.c_opt;
        break;
    case CutoffStrategy::refined:
        out.cutoff_search =
            refined_cutoff(out.training_scores, cfg.q_metric, cfg.refined, model.inverted);
        model.cutoff = out.cutoff_search.c_opt;
        break;
    }
    model.cutoff = std::clamp(model.cutoff, 0.0, 1.0);
    return out;
}

// Scores and classifies everything outside the model's training set.
// Works on the fitting dataset or on disjoint data with matching columns.
inline RunReport evaluate(const Dataset& d, const TrainedModel& model,
                          size_t threads = 0) {
    validate(d);
    if (d.cols() != model.scaling.cols())
        throw DataError("model dimension mismatch: model for " +
                        std::to_string(model.scaling.cols()) + " columns, data has " +
                        std::to_string(d.cols()));
    const Dataset ds = apply_scaling(d, model.scaling);
    const std::vector<IncidenceVector> encoded = encode_dataset(ds, model.predicate);
    const detail::ScoredSet scored =
        detail::score_outside_training(d, encoded, model, threads);
    if (scored.rows.empty())
        throw DataError("no objects to classify");

    RunReport r;
    r.inverted = model.inverted;
    r.seconds_scoring = scored.seconds;
    r.objects_per_second = scored.seconds > 0.0
                               ? static_cast<double>(scored.rows.size()) / scored.seconds
                               : std::numeric_limits<double>::infinity();
    r.objects.resize(scored.rows.size());
    std::vector<uint8_t> pred(scored.rows.size());
    for (size_t k = 0; k < scored.rows.size(); ++k) {
        uint8_t p = scored.scores[k] >= model.cutoff ? 1 : 0;
        if (model.inverted) p = p ? 0 : 1;
        pred[k] = p;
        r.objects[k] = {d.ids[scored.rows[k]], scored.scores[k], p, scored.truth[k],
                        scored.witnesses[k]};
    }
    r.confusion = confusion(pred, scored.truth);
    r.accuracy = r.confusion.accuracy();
    r.kappa = r.confusion.kappa();
    r.tp_fp_ratio = r.confusion.tp_fp_ratio();

    std::vector<double> pos, neg;
    for (size_t k = 0; k < scored.rows.size(); ++k)
        (scored.truth[k] ? pos : neg).push_back(scored.scores[k]);
    r.av1 = detail::mean_or_zero(pos);
    r.av0 = detail::mean_or_zero(neg);
    if (pos.empty())
        r.q_avg_ratio = std::numeric_limits<double>::quiet_NaN();
    else if (r.av0 == 0.0)
        r.q_avg_ratio = std::numeric_limits<double>::infinity();
    else
        r.q_avg_ratio = r.av1 / r.av0;
    return r;
}

struct IdentifyResult {
    int64_t id = 0;
    uint8_t predicted = 0;
    bool has_witness = false;
    int64_t witness_id = 0;
};

// Exact identification: an object x outside D1 is flagged positive iff it
// has at least one excess and some positive object's excess set contains
// all of x's. Equivalent to the threshold pipeline with T = D1 and C = 1.
inline std::vector<IdentifyResult> identify(const Dataset& d,
                                            const PredicateConfig& predicate,
                                            size_t threads = 0) {
    validate(d);
    if (d.cols() == 0)
        throw DataError("dataset has no measurement columns");
    const ScalingParams sc = fit_scaling(d);
    const Dataset ds = apply_scaling(d, sc);
    const std::vector<IncidenceVector> encoded = encode_dataset(ds, predicate);

    std::vector<size_t> positive_rows, query_rows;
    for (size_t i = 0; i < d.rows(); ++i)
        (d.labels[i] ? positive_rows : query_rows).push_back(i);
    if (positive_rows.empty())
        throw DataError("no positive objects to identify against");

    std::vector<IdentifyResult> out(query_rows.size());
    detail::parallel_for(query_rows.size(), threads, [&](size_t k) {
        const size_t row = query_rows[k];
        IdentifyResult res;
        res.id = d.ids[row];
        if (encoded[row].weight() > 0) {
            for (size_t p : positive_rows) {
                if (is_subset(encoded[row], encoded[p])) {
                    res.predicted = 1;
                    res.has_witness = true;
                    res.witness_id = d.ids[p];
                    break;
                }
            }
        }
        out[k] = res;
    });
    return out;
}

} // namespace coindex
