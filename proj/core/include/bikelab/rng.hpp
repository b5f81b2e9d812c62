#pragma once

#include <cstdint>

#include "bikelab/geometry.hpp"

namespace bikelab {

// Small deterministic generator (splitmix64). Experiments and tests use this
// instead of std distributions so that seeded runs are byte-identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Point2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

private:
    std::uint64_t state_;
};

}  // namespace bikelab
