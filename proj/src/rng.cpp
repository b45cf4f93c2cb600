#include "otfs/rng.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

std::uint64_t SplitMix64::below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("SplitMix64::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double SplitMix64::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Complex SplitMix64::cgaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = s * gaussian();
    const double im = s * gaussian();
    return {re, im};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    SplitMix64 g(master ^ (tag * 0xD1B54A32D192ED03ULL));
    return g.next_u64();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a, std::uint64_t tag_b) {
    return derive_seed(derive_seed(master, tag_a), tag_b);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a, std::uint64_t tag_b,
                          std::uint64_t tag_c) {
    return derive_seed(derive_seed(master, tag_a, tag_b), tag_c);
}

}  // namespace otfs
