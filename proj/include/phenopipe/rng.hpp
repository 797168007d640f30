#pragma once

#include <cstdint>
#include <cmath>

namespace phenopipe {

/// Deterministic 64-bit generator (splitmix64). Used instead of the
/// standard distributions so that seeded runs are bit-identical across
/// platforms and standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform(std::uint64_t n) {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    /// Uniform double in [0, 1).
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_real() < p; }

    /// Derive an independent stream for a sub-task; stable in k.
    Rng spawn(std::uint64_t k) const {
        Rng mixer(state_ ^ (0xd1342543de82ef95ULL * (k + 1)));
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
};

} // namespace phenopipe
