#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "coindex/dataset.hpp"
#include "coindex/errors.hpp"
#include "coindex/rng.hpp"

namespace coindex {

// A planted defect signature. Affected rows get `magnitude` on the listed
// columns, modulated by a deterministic rotation (up to +20%, phase = row
// index) so that each planted column carries the row maximum for some rows.
// No noise lands on planted cells, so rows of one archetype always share
// the same excess set.
struct Archetype {
    std::vector<size_t> columns;
    double magnitude = 25.0;
};

// Wafer-like batch: noise rows with rare heavy outlier cells, plus planted
// archetype rows. The outlier component is what keeps the scaled noise cells
// small: column sigma is dominated by the rare spikes, so only genuine
// outliers cross a 0.5 z-score threshold, as in real test data where defects
// stand out against tightly clustered measurements.
struct SyntheticSpec {
    size_t rows = 1000;
    size_t cols = 100;
    double defect_rate = 0.05;             // fraction of rows made positive
    std::vector<Archetype> archetypes;     // at least one
    double noise_sigma = 1.0;              // 0 silences noise and outliers
    double outlier_rate = 0.01;            // per-cell spike probability
    double outlier_scale = 100.0;          // spike size in noise_sigma units
    uint64_t seed = 1;

    void check() const {
        if (rows == 0 || cols == 0)
            throw ConfigError("synthetic spec needs rows and cols >= 1");
        if (!(defect_rate > 0.0) || !(defect_rate < 1.0))
            throw ConfigError("defect rate must be in (0, 1)");
        if (archetypes.empty())
            throw ConfigError("at least one archetype required");
        for (const auto& a : archetypes) {
            if (a.columns.empty())
                throw ConfigError("archetype with no columns");
            for (size_t c : a.columns)
                if (c >= cols)
                    throw ConfigError("archetype column out of range");
        }
        if (noise_sigma < 0.0 || outlier_rate < 0.0 || outlier_rate > 1.0)
            throw ConfigError("bad noise parameters");
    }
};

// Deterministic given the seed: positive rows are a seeded draw, every cell
// consumes a fixed number of generator values, and the i-th positive row
// gets archetype i mod k.
inline Dataset gen_synthetic(const SyntheticSpec& spec) {
    spec.check();
    SplitMix64 rng(spec.seed);

    const size_t m = spec.rows, n = spec.cols;
    const size_t npos = static_cast<size_t>(static_cast<double>(m) * spec.defect_rate);

    std::vector<size_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = i;
    shuffle(order, rng);

    std::vector<size_t> archetype_of(m, SIZE_MAX);
    for (size_t k = 0; k < npos; ++k)
        archetype_of[order[k]] = k % spec.archetypes.size();

    Dataset d;
    d.column_names.reserve(n);
    for (size_t j = 0; j < n; ++j) d.column_names.push_back("c" + std::to_string(j));
    d.values.resize(m * n);
    d.labels.resize(m);
    d.ids.resize(m);

    for (size_t i = 0; i < m; ++i) {
        d.ids[i] = static_cast<int64_t>(i);
        d.labels[i] = archetype_of[i] != SIZE_MAX ? 1 : 0;
        for (size_t j = 0; j < n; ++j) {
            // fixed draw pattern: gaussian, spike coin, magnitude, sign
            const double g = rng.gaussian();
            const bool spike = rng.uniform() < spec.outlier_rate;
            const double mag = 0.5 + rng.uniform(); // in [0.5, 1.5)
            const bool negative = rng.next() & 1;
            double v = g;
            if (spike) v += (negative ? -1.0 : 1.0) * spec.outlier_scale * mag;
            d.values[i * n + j] = spec.noise_sigma * v;
        }
        if (d.labels[i]) {
            const Archetype& a = spec.archetypes[archetype_of[i]];
            const size_t width = a.columns.size();
            for (size_t k = 0; k < width; ++k) {
                const double bump = 0.2 * double((i + k) % width) / double(width);
                d.values[i * n + a.columns[k]] = a.magnitude * (1.0 + bump);
            }
        }
    }
    return d;
}

// Convenience construction used by the CLI: k archetypes of arch_cols
// columns each, drawn disjointly from a seeded shuffle of all columns.
inline std::vector<Archetype> make_archetypes(size_t k, size_t arch_cols, double magnitude,
                                              size_t n, uint64_t seed) {
    if (k == 0 || arch_cols == 0)
        throw ConfigError("archetype count and size must be >= 1");
    if (k * arch_cols > n)
        throw ConfigError("archetypes need " + std::to_string(k * arch_cols) +
                          " distinct columns, only " + std::to_string(n) + " available");
    std::vector<size_t> pool(n);
    for (size_t j = 0; j < n; ++j) pool[j] = j;
    SplitMix64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull); // independent of the cell stream
    shuffle(pool, rng);
    std::vector<Archetype> out(k);
    size_t next = 0;
    for (size_t a = 0; a < k; ++a) {
        out[a].magnitude = magnitude;
        for (size_t c = 0; c < arch_cols; ++c) out[a].columns.push_back(pool[next++]);
        std::sort(out[a].columns.begin(), out[a].columns.end());
    }
    return out;
}

} // namespace coindex
