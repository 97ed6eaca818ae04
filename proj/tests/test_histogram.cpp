#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "coindex/histogram.hpp"
#include "coindex/synthetic.hpp"
#include "support.hpp"

using namespace coindex;

namespace {

double gini_bruteforce(const std::vector<double>& v) {
    double num = 0.0, sum = 0.0;
    for (double a : v) sum += a;
    for (double a : v)
        for (double b : v) num += std::abs(a - b);
    return num / (2.0 * double(v.size()) * sum);
}

} // namespace

TEST_CASE("histogram counts the winning trainer per positive object") {
    TrainedModel model;
    model.train_ids = {100, 200, 300};
    RunReport r;
    // 5 positives: winners 0,0,1,0,2; negatives must not count
    r.objects = {
        {1, 0.9, 1, 1, 0}, {2, 0.8, 1, 1, 0}, {3, 0.7, 1, 1, 1},
        {4, 0.9, 1, 1, 0}, {5, 0.6, 0, 1, 2}, {6, 0.2, 0, 0, 1},
    };
    const PrototypeHistogram h = prototype_histogram(r, model);
    CHECK(h.total == 5);
    REQUIRE(h.rows.size() == 3);
    CHECK(h.rows[0].train_id == 100);
    CHECK(h.rows[0].count == 3);
    CHECK(h.rows[0].fraction == Approx(0.6));
    CHECK(h.rows[1].count == 1);
    CHECK(h.rows[1].train_id == 200); // tie with 300 broken by id
    CHECK(h.rows[2].train_id == 300);

    uint64_t sum = 0;
    for (const auto& row : h.rows) sum += row.count;
    CHECK(sum == h.total);
}

TEST_CASE("single trainer owns the whole histogram") {
    TrainedModel model;
    model.train_ids = {7};
    RunReport r;
    r.objects = {{1, 0.9, 1, 1, 0}, {2, 0.8, 1, 1, 0}};
    const PrototypeHistogram h = prototype_histogram(r, model);
    REQUIRE(h.rows.size() == 1);
    CHECK(h.rows[0].fraction == 1.0);
    CHECK(format_percent(h.rows[0].fraction) == "100.00");
}

TEST_CASE("histogram needs positives outside the training set") {
    TrainedModel model;
    model.train_ids = {7};
    RunReport r;
    r.objects = {{1, 0.2, 0, 0, 0}};
    CHECK_THROWS_AS(prototype_histogram(r, model), DataError);
}

TEST_CASE("histogram formatter reproduces the 223-of-410 layout") {
    CHECK(format_percent(223.0 / 410.0) == "54.39");
    TrainedModel model;
    model.train_ids = {3762};
    RunReport r;
    r.objects.resize(410);
    for (size_t i = 0; i < 410; ++i) r.objects[i] = {int64_t(i), 0.5, 1, 1, 0};
    const PrototypeHistogram h = prototype_histogram(r, model);
    const auto lines = format_histogram(h);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "train_id,h_percent,n");
    CHECK(lines[1] == "3762,100.00,410");
}

TEST_CASE("full pipeline histogram sums to |D1 minus T| with archetype structure") {
    SyntheticSpec spec;
    spec.rows = 400;
    spec.cols = 30;
    spec.defect_rate = 0.2;
    spec.archetypes = {{{2, 5, 9}, 25.0}, {{14, 20, 26}, 25.0}};
    spec.noise_sigma = 0.0;
    spec.seed = 11;
    const Dataset d = gen_synthetic(spec);

    RunConfig cfg;
    cfg.predicate.kind = PredicateKind::abs_t_excess;
    cfg.predicate.t = 0.5;
    cfg.train_percent = 10.0;
    cfg.seed = 2;
    const TrainOutcome out = train(d, cfg);
    const RunReport r = evaluate(d, out.model);
    const PrototypeHistogram h = prototype_histogram(r, out.model);

    size_t positives_outside = 0;
    for (const auto& o : r.objects) positives_outside += o.truth;
    uint64_t sum = 0;
    for (const auto& row : h.rows) sum += row.count;
    CHECK(sum == h.total);
    CHECK(h.total == positives_outside);

    // two archetypes: the first trainer of each archetype wins its whole
    // class, so exactly two dominant rows appear
    REQUIRE(h.rows.size() >= 2);
    CHECK(h.rows[0].count + h.rows[1].count == h.total);
}

TEST_CASE("gini coefficient") {
    CHECK(gini({1, 1, 1, 1}) == 0.0);
    CHECK(gini({0, 1}) == 0.5);
    CHECK(gini({5}) == 0.0);
    CHECK_THROWS_AS(gini({0, 0, 0}), DataError);
    CHECK_THROWS_AS(gini(std::vector<double>{}), DataError);

    SECTION("matches the quadratic formula on random vectors") {
        SplitMix64 rng(55);
        for (int round = 0; round < 1000; ++round) {
            std::vector<double> v(1 + rng.below(40));
            for (double& x : v) x = rng.uniform() * 10.0;
            CHECK(gini(v) == Approx(gini_bruteforce(v)).margin(1e-12));
        }
    }
    SECTION("scale invariance") {
        SplitMix64 rng(56);
        for (int round = 0; round < 100; ++round) {
            std::vector<double> v(2 + rng.below(20));
            for (double& x : v) x = rng.uniform();
            const double c = 0.1 + rng.uniform() * 100.0;
            std::vector<double> scaled = v;
            for (double& x : scaled) x *= c;
            CHECK(gini(scaled) == Approx(gini(v)).margin(1e-12));
        }
    }
    SECTION("permutation invariance") {
        SplitMix64 rng(57);
        std::vector<double> v(25);
        for (double& x : v) x = rng.uniform();
        std::vector<double> shuffled = v;
        shuffle(shuffled, rng);
        CHECK(gini(shuffled) == Approx(gini(v)).margin(1e-15));
    }
}
