#pragma once

#include <optional>

#include "hqf/disc.hpp"
#include "hqf/herm.hpp"

namespace hqf {

// Change of basis over the extension plus a unit scale factor:
// gamma2 * q_src(m) = q_dst(gamma1 * m), columns of gamma1 = images of the
// source basis.
struct Similitude {
    QMatrix gamma1;
    Scalar gamma2;
};

// The target state of the rank-2 normalization: q(x) = q(y) = 0, f(x,y) = 0,
// f(x, Pi y) = 1.
struct IsotropicPair {
    HVector x, y;
};

// One normalized pair together with the 2x2 transition over the extension
// (rows express the outputs in terms of the inputs: x' = T00 x + T01 y, ...)
// and the number of Newton steps the isotropy solve used.
struct PairResult {
    HVector x, y;
    QMatrix transition;
    unsigned newton_iters = 0;
};

// Core normalizer, exported for the property tests.  Requires the pairing
// f(x, Pi y) to equal the unit `mu` exactly on entry; returns a pair spanning
// the same extension submodule whose (x, y, Pi x, Pi y) Gram matrix is mu
// times the standard 4x4 block.  Newton terminates at an exactly-zero
// residual within ceil(log2 N) + 2 steps (pi is nilpotent); anything else
// raises newton_divergence.
PairResult pair_engine(const HermForm& form, HVector x, HVector y, const Scalar& mu);

// The mu = 1 instance: pipeline of Newton isotropy solve, pairing-true
// rescale, y-isotropy step, and cross-pairing elimination.
IsotropicPair make_isotropic_pair(const HermForm& form, const HVector& x, const HVector& y);

// 4x4 Gram matrix of (x, y, Pi x, Pi y) under the form's bilinear pairing —
// the object the normalization postcondition speaks about.
std::vector<Scalar> pair_gram(const HermForm& form, const HVector& x, const HVector& y);

// Exact check that s is a similitude src -> dst: the pullback of dst along
// gamma1 must equal gamma2 * src as (A, B) matrices (complete, not sampled).
bool is_similitude(const HermForm& src, const HermForm& dst, const Similitude& s);

// Similitude from standard_form(ring, n) to the given non-degenerate form:
// hyperbolic pairs split off by pivot search + pair_engine + orthogonal
// projection through the self-inverse standard block; odd terminal generator
// contributes gamma2 = q(v).  Raises degenerate.
Similitude reduce_to_standard(const HermForm& form);

// Lift a similitude that is valid for the truncation of form_high at
// precision from_prec to a similitude at full precision whose truncation
// equals sim_low entry-for-entry.  Raises not_a_similitude_mod_i.
Similitude lift_similitude(const HermForm& form_high, const Similitude& sim_low,
                           unsigned from_prec);

// Composite similitude f1 -> f2 when both are non-degenerate of equal rank;
// absent when at least one side is degenerate (no certificate exists in that
// case — including the both-degenerate one).  Ring/rank mismatches raise.
std::optional<Similitude> are_similar(const HermForm& f1, const HermForm& f2);

} // namespace hqf
