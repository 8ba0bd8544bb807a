#pragma once

#include <cstdint>

#include "hqf/herm.hpp"

namespace hqf {

// Outcome of a randomized sweep.  The checksum is an order-independent XOR
// fold of per-sample digests, so the serial and OpenMP drivers must agree
// bit-for-bit; the unit tests assert exactly that.
struct SweepResult {
    std::uint64_t samples = 0;
    std::uint64_t failures = 0;
    std::uint64_t checksum = 0;
    bool operator==(const SweepResult&) const = default;
};

// Random odd-rank forms: the divided discriminant times theta must reproduce
// the plain Gram determinant exactly.
SweepResult sweep_divided_disc(const ring_ptr& ring, std::uint64_t count, std::uint64_t seed,
                               bool parallel);

// Search for an odd-rank form whose plain Gram determinant is a unit (none
// should exist; every hit counts as a failure).
SweepResult sweep_unit_disc_search(const ring_ptr& ring, std::uint64_t count, std::uint64_t seed,
                                   bool parallel);

// Scramble the standard form by a random unimodular change of basis and a
// unit scale, reduce back, and verify the similitude exactly.
SweepResult sweep_reduce_roundtrip(const ring_ptr& ring, unsigned max_rank, std::uint64_t count,
                                   std::uint64_t seed, bool parallel);

// Random rank-2 form and vectors with a unit pairing, prescaled to pairing 1:
// the normalized pair's 4x4 Gram matrix must equal the standard block.
SweepResult sweep_pair_normalize(const ring_ptr& ring, std::uint64_t count, std::uint64_t seed,
                                 bool parallel);

} // namespace hqf
