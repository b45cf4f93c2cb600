#pragma once

#include "otfs/types.hpp"

#include <cstdint>

namespace otfs {

// SplitMix64 stream generator (Steele/Lea/Flood). The algorithm is fully
// specified by its constants, so seeded runs reproduce bit-for-bit on any
// platform and in any reimplementation of this simulator. Gaussians come
// from Box-Muller on the 53-bit uniforms, again fully specified.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer on [0, n) by rejection.
    std::uint64_t below(std::uint64_t n);

    // Standard normal; Box-Muller pairs, one cached.
    double gaussian();

    // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
    Complex cgaussian(double variance);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derived sub-streams: one SplitMix64 step per tag. Used to key per-frame
// channel / payload / noise streams off a single master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a, std::uint64_t tag_b);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a, std::uint64_t tag_b,
                          std::uint64_t tag_c);

}  // namespace otfs
