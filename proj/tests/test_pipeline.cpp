#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "coindex/pipeline.hpp"
#include "coindex/model_io.hpp"
#include "coindex/synthetic.hpp"
#include "support.hpp"

using namespace coindex;

namespace {

// small separable batch: positives carry a planted signature, no noise
Dataset small_planted(size_t m = 60, size_t n = 12, uint64_t seed = 5) {
    SyntheticSpec spec;
    spec.rows = m;
    spec.cols = n;
    spec.defect_rate = 0.2;
    spec.archetypes = {{{1, 4, 7}, 25.0}};
    spec.noise_sigma = 0.0;
    spec.seed = seed;
    return gen_synthetic(spec);
}

RunConfig base_config() {
    RunConfig cfg;
    cfg.predicate.kind = PredicateKind::abs_t_excess;
    cfg.predicate.t = 0.5;
    cfg.train_percent = 25.0;
    cfg.seed = 1;
    cfg.cutoff_strategy = CutoffStrategy::grid;
    cfg.grid_points = 101;
    return cfg;
}

} // namespace

TEST_CASE("select_training draws ceil(|D1| p / 100) positives deterministically") {
    Dataset d;
    const size_t m = 2000;
    d.column_names = {"c0"};
    SplitMix64 rng(3);
    size_t positives = 0;
    for (size_t i = 0; i < m; ++i) {
        d.ids.push_back(static_cast<int64_t>(i));
        const uint8_t lab = positives < 410 && (rng.next() & 1) ? 1 : 0;
        positives += lab;
        d.labels.push_back(lab);
        d.values.push_back(0.0);
    }
    REQUIRE(d.positive_count() == 410);

    const auto ids = select_training(d, 2.0, 1);
    CHECK(ids.size() == 9); // ceil(410 * 0.02) = 9

    SECTION("selected ids are positive and unique") {
        std::set<int64_t> seen;
        for (int64_t id : ids) {
            CHECK(seen.insert(id).second);
            const auto row = std::find(d.ids.begin(), d.ids.end(), id) - d.ids.begin();
            CHECK(d.labels[size_t(row)] == 1);
        }
    }
    SECTION("same seed reproduces the set, another seed moves it") {
        CHECK(select_training(d, 2.0, 1) == ids);
        CHECK(select_training(d, 2.0, 2) != ids);
    }
    SECTION("p = 100 takes every positive") {
        CHECK(select_training(d, 100.0, 9).size() == 410);
    }
    SECTION("out-of-range percentage rejected") {
        CHECK_THROWS_AS(select_training(d, 0.0, 1), ConfigError);
        CHECK_THROWS_AS(select_training(d, 101.0, 1), ConfigError);
    }
}

TEST_CASE("select_training needs at least one positive") {
    const Dataset d = testsupport::make_dataset({{1.0}, {2.0}}, {0, 0});
    CHECK_THROWS_AS(select_training(d, 10.0, 1), DataError);
}

TEST_CASE("training on separable data reaches kappa 1") {
    const Dataset d = small_planted();
    const TrainOutcome out = train(d, base_config());
    CHECK(out.model.av1 > out.model.av0);
    CHECK_FALSE(out.model.inverted);
    const RunReport r = evaluate(d, out.model);
    CHECK(r.kappa == 1.0);
    CHECK(r.confusion.fp == 0);
    CHECK(r.confusion.fn == 0);
    CHECK(std::isinf(r.tp_fp_ratio));
}

TEST_CASE("iris setosa training set size") {
    const Dataset d = load_csv(testsupport::data_dir() + "/iris_setosa.csv", "label", "id");
    RunConfig cfg = base_config();
    cfg.predicate.kind = PredicateKind::t_excess;
    cfg.predicate.t = 0.1;
    cfg.train_percent = 20.0;
    const TrainOutcome out = train(d, cfg);
    CHECK(out.model.train_ids.size() == 10); // ceil(50 * 0.20)
}

TEST_CASE("training with T = D1 leaves only negatives") {
    const Dataset d = small_planted();
    RunConfig cfg = base_config();
    cfg.train_percent = 100.0;
    SECTION("kappa grid optimization fails") {
        CHECK_THROWS_AS(train(d, cfg), DataError);
    }
    SECTION("naive cutoff still trains") {
        cfg.cutoff_strategy = CutoffStrategy::naive;
        CHECK_NOTHROW(train(d, cfg));
    }
}

TEST_CASE("evaluate excludes the training objects and sums the confusion") {
    const Dataset d = small_planted();
    const TrainOutcome out = train(d, base_config());
    const RunReport r = evaluate(d, out.model);
    const size_t expected = d.rows() - out.model.train_ids.size();
    CHECK(r.objects.size() == expected);
    CHECK(r.confusion.total() == expected);
    std::set<int64_t> train_ids(out.model.train_ids.begin(), out.model.train_ids.end());
    for (const auto& o : r.objects) CHECK(train_ids.count(o.id) == 0);
    CHECK(r.accuracy ==
          Approx(double(r.confusion.tp + r.confusion.tn) / double(expected)));
}

TEST_CASE("identical config gives a bit-identical report") {
    const Dataset d = small_planted();
    RunConfig cfg = base_config();
    const TrainOutcome a = train(d, cfg);
    const TrainOutcome b = train(d, cfg);
    CHECK(a.model.train_ids == b.model.train_ids);
    CHECK(a.model.cutoff == b.model.cutoff);
    const RunReport ra = evaluate(d, a.model);
    const RunReport rb = evaluate(d, b.model);
    REQUIRE(ra.objects.size() == rb.objects.size());
    for (size_t k = 0; k < ra.objects.size(); ++k) {
        CHECK(ra.objects[k].id == rb.objects[k].id);
        CHECK(ra.objects[k].score == rb.objects[k].score);
        CHECK(ra.objects[k].prediction == rb.objects[k].prediction);
    }
}

TEST_CASE("thread count does not change the scores") {
    const Dataset d = small_planted(120, 16, 9);
    RunConfig cfg = base_config();
    cfg.threads = 1;
    const TrainOutcome one = train(d, cfg);
    cfg.threads = 4;
    const TrainOutcome four = train(d, cfg);
    CHECK(one.training_scores.scores == four.training_scores.scores);
    CHECK(one.model.cutoff == four.model.cutoff);
    const RunReport r1 = evaluate(d, one.model, 1);
    const RunReport r4 = evaluate(d, one.model, 4);
    for (size_t k = 0; k < r1.objects.size(); ++k)
        CHECK(r1.objects[k].score == r4.objects[k].score);
}

TEST_CASE("inverted training flips the prediction sense") {
    // Two disjoint positive signatures; three negatives duplicate the first
    // one. When the single trainer is the first positive, the held-out
    // positive scores 0 while those negatives score 1, so av1 < av0 and the
    // prediction sense must flip.
    std::vector<std::vector<double>> rows(20, std::vector<double>(4, 0.0));
    std::vector<uint8_t> labels(20, 0);
    rows[0] = {8, 8, 0, 0};
    rows[1] = {0, 0, 8, 8};
    labels[0] = labels[1] = 1;
    for (size_t i : {10u, 11u, 12u}) rows[i] = {8, 8, 0, 0};
    const Dataset d = testsupport::make_dataset(rows, labels);

    RunConfig cfg = base_config();
    cfg.train_percent = 50.0; // one of the two positives
    bool found = false;
    for (uint64_t seed = 1; seed <= 16 && !found; ++seed) {
        cfg.seed = seed;
        if (select_training(d, cfg.train_percent, seed) != std::vector<int64_t>{0}) continue;
        found = true;
        const TrainOutcome out = train(d, cfg);
        CHECK(out.model.inverted);
        CHECK(out.model.av1 < out.model.av0);
        const RunReport r = evaluate(d, out.model);
        CHECK(r.inverted);
        for (const auto& o : r.objects) {
            if (o.id == 1) CHECK(o.prediction == 1); // low score, flipped to positive
            if (o.id == 10 || o.id == 11 || o.id == 12)
                CHECK(o.prediction == 0); // high score, flipped to negative
        }
    }
    REQUIRE(found);
}

TEST_CASE("column-range selection supports partial-measurement prediction") {
    // train on the first half of the measurement columns only, then apply
    // the model to the same selection of a fresh batch
    SyntheticSpec spec;
    spec.rows = 300;
    spec.cols = 16;
    spec.defect_rate = 0.15;
    spec.archetypes = {{{1, 3, 5}, 25.0}, {{10, 12, 14}, 25.0}};
    spec.noise_sigma = 0.0;
    spec.seed = 31;
    const Dataset full = gen_synthetic(spec);
    const Dataset early = select_columns(full, ColumnSelection::range(0, 7));
    REQUIRE(early.cols() == 8);

    RunConfig cfg = base_config();
    cfg.train_percent = 20.0;
    const TrainOutcome out = train(early, cfg);
    CHECK(out.model.scaling.cols() == 8);

    // the early columns carry only the first archetype; its objects are
    // still fully recovered, the second archetype's are invisible
    const RunReport r = evaluate(early, out.model);
    CHECK(r.confusion.total() == early.rows() - out.model.train_ids.size());
    CHECK(r.confusion.fp == 0);

    spec.seed = 32;
    const Dataset fresh = select_columns(gen_synthetic(spec), ColumnSelection::range(0, 7));
    CHECK_NOTHROW(evaluate(fresh, out.model));
    CHECK_THROWS_AS(evaluate(gen_synthetic(spec), out.model), DataError); // width mismatch
}

TEST_CASE("min aggregator trains on single-archetype data") {
    // all trainers share one planted pattern, so even the minimum similarity
    // separates the classes
    const Dataset d = small_planted(80, 10, 21);
    RunConfig cfg = base_config();
    cfg.aggregator = AggregatorKind::min;
    cfg.train_percent = 30.0;
    const TrainOutcome out = train(d, cfg);
    const RunReport r = evaluate(d, out.model);
    CHECK(r.kappa == 1.0);
}

TEST_CASE("identification flags exactly the contained excess patterns") {
    PredicateConfig pred;
    pred.kind = PredicateKind::abs_t_excess;
    pred.t = 0.5;

    SECTION("object with empty excess set stays negative") {
        // row 2 equals the column means, so it scales to zero everywhere
        const Dataset d = testsupport::make_dataset(
            {{10, 0, 0}, {0, 10, 0}, {5, 5, 0}}, {1, 1, 0});
        const auto res = identify(d, pred);
        REQUIRE(res.size() == 1);
        CHECK(res[0].predicted == 0);
    }
    SECTION("duplicate of a positive is identified with a witness") {
        const Dataset d = testsupport::make_dataset(
            {{10, 0, 1}, {0, 10, 2}, {10, 0, 1}, {3, 3, 1.4}}, {1, 1, 0, 0});
        const auto res = identify(d, pred);
        REQUIRE(res.size() == 2);
        CHECK(res[0].predicted == 1);
        CHECK(res[0].has_witness);
        CHECK(res[0].witness_id == 0);
    }
}

TEST_CASE("identify equals the threshold pipeline at p = 100, C = 1") {
    SplitMix64 rng(77);
    PredicateConfig pred;
    pred.kind = PredicateKind::abs_t_excess;
    pred.t = 0.5;
    for (int round = 0; round < 40; ++round) {
        // random 50 x 10 instance with a handful of positives
        Dataset d;
        d.column_names.assign(10, "");
        for (size_t j = 0; j < 10; ++j) d.column_names[j] = "c" + std::to_string(j);
        for (size_t i = 0; i < 50; ++i) {
            d.ids.push_back(static_cast<int64_t>(i));
            d.labels.push_back(rng.uniform() < 0.2 ? 1 : 0);
            for (size_t j = 0; j < 10; ++j) d.values.push_back(rng.gaussian());
        }
        if (d.positive_count() == 0 || d.positive_count() == d.rows()) continue;

        const auto ident = identify(d, pred);

        // manual pipeline: T = all positives, cutoff 1, no inversion
        TrainedModel model;
        model.scaling = fit_scaling(d);
        model.predicate = pred;
        model.similarity = SimilarityKind::coincidence;
        model.aggregator = AggregatorKind::max;
        const Dataset ds = apply_scaling(d, model.scaling);
        const auto encoded = encode_dataset(ds, pred);
        for (size_t i = 0; i < d.rows(); ++i) {
            if (d.labels[i]) {
                model.train_ids.push_back(d.ids[i]);
                model.train_vectors.push_back(encoded[i]);
            }
        }
        model.cutoff = 1.0;
        const RunReport r = evaluate(d, model);

        REQUIRE(r.objects.size() == ident.size());
        for (size_t k = 0; k < ident.size(); ++k) {
            CHECK(r.objects[k].id == ident[k].id);
            CHECK(r.objects[k].prediction == ident[k].predicted);
        }
    }
}

TEST_CASE("model file round-trips") {
    testsupport::TempDir tmp("model_io");
    const Dataset d = small_planted();
    RunConfig cfg = base_config();
    const TrainOutcome out = train(d, cfg);
    save_model(out.model, tmp.file("m.model"));
    const TrainedModel back = load_model(tmp.file("m.model"));
    CHECK(back.cutoff == out.model.cutoff);
    CHECK(back.inverted == out.model.inverted);
    CHECK(back.av0 == out.model.av0);
    CHECK(back.av1 == out.model.av1);
    CHECK(back.train_ids == out.model.train_ids);
    CHECK(back.scaling.mu == out.model.scaling.mu);
    CHECK(back.scaling.sigma == out.model.scaling.sigma);
    CHECK(back.predicate.kind == out.model.predicate.kind);
    CHECK(back.predicate.t == out.model.predicate.t);
    REQUIRE(back.train_vectors.size() == out.model.train_vectors.size());
    for (size_t k = 0; k < back.train_vectors.size(); ++k)
        CHECK(back.train_vectors[k] == out.model.train_vectors[k]);

    SECTION("a reloaded model evaluates identically") {
        const RunReport ra = evaluate(d, out.model);
        const RunReport rb = evaluate(d, back);
        for (size_t k = 0; k < ra.objects.size(); ++k) {
            CHECK(ra.objects[k].score == rb.objects[k].score);
            CHECK(ra.objects[k].prediction == rb.objects[k].prediction);
        }
    }
}

TEST_CASE("training rejects a zero-column dataset") {
    Dataset d;
    d.labels = {1, 0};
    d.ids = {0, 1};
    CHECK_THROWS_AS(train(d, base_config()), DataError);
}
