#pragma once

#include <cstdint>

#include "hqf/ring.hpp"

namespace hqf {

// SplitMix64.  Small, fast, and — the property the batch kernels rely on —
// seedable per sample index, so a sweep yields identical results no matter
// how its iterations are scheduled across threads.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform-enough draw in [0, n); bias is irrelevant for test sampling and
    // rejection loops would not change determinism anyway.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

// Decorrelated stream for sample `index` under a sweep-level seed.
inline Rng rng_stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ 0x632be59bd9b4e019ull * (index + 1));
    return Rng(mix.next());
}

Scalar random_scalar(const RingSpec& r, Rng& g);
Scalar random_unit_scalar(const RingSpec& r, Rng& g);
QElt random_qelt(const RingSpec& r, Rng& g);
QElt random_unit_qelt(const RingSpec& r, Rng& g);
// Product of `steps` random elementary operations (unit row scalings and
// row additions over the extension): unimodular by construction.
QMatrix random_unimodular(const RingSpec& r, unsigned n, Rng& g, unsigned steps = 12);

} // namespace hqf
