#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace coindex {

// SplitMix64 (Steele/Lea/Flood). State advances by the golden-gamma
// constant; output is the finalizing mix of the new state. Small, fast,
// and identical on every platform, which is what the seeded-run
// reproducibility contract needs.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1): 53 mantissa bits
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // unbiased draw in [0, bound) by rejection
    uint64_t below(uint64_t bound) {
        if (bound == 0) return 0;
        const uint64_t threshold = (0 - bound) % bound;
        while (true) {
            const uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Box-Muller; uses two uniforms per value so the draw count per cell is
    // fixed regardless of caller pattern.
    double gaussian() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    uint64_t state_;
};

// Fisher-Yates with the unbiased bounded draw above.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace coindex
