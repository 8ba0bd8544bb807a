#pragma once

#include "hqf/herm.hpp"

namespace hqf {

// Discriminant values carry their effective absolute precision: N for the
// plain determinant, N - v(theta) for divided results.  The representative is
// canonical modulo pi^precision (higher digits zeroed); comparisons are only
// meaningful between equal precisions.
struct DiscResult {
    Scalar value;
    unsigned precision = 0;
    bool divided = false;
};

// Determinant of the 2n x 2n Gram matrix, exact at full precision.
DiscResult disc(const HermForm& form);

// Odd rank only: the Gram determinant divided exactly by theta = 4*pi - t^2.
// theta is a zero divisor in the truncation, so the division happens on
// canonical lifts (integers / F_q[z] polynomials) with the (A, B) constraints
// substituted in the lift; the exact quotient is then reduced to precision
// N - v(theta).  Deterministic.  Raises even_rank, insufficient_precision
// (theta vanishes at the working precision), or not_divisible (impossible for
// valid forms; flags corrupted input).
DiscResult disc_divided(const HermForm& form);

// Unit-ness of disc (even rank) or disc_divided (odd rank).
bool is_nondegenerate(const HermForm& form);

// Determinant of a square base-ring matrix (row-major), via the same
// canonical-lift fraction-free elimination, reduced at full precision.
Scalar det_scalar_matrix(const RingSpec& r, const std::vector<Scalar>& m, unsigned dim);

} // namespace hqf
