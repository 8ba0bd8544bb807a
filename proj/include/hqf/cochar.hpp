#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace hqf {

// A finite group (or monoid of chosen generators) acting on the cocharacter
// lattice Z^r by unimodular integer matrices, row-major.
struct LatticeAction {
    unsigned rank = 0;
    std::vector<std::vector<mpz_class>> generators;
};

// Validates shapes and det = ±1 per generator (non_unimodular_generator).
LatticeAction make_action(unsigned rank, std::vector<std::vector<mpz_class>> generators);

// Coinvariant lattice X_* / <gamma mu - mu>: Smith normal form of the matrix
// whose columns are (gamma - 1)e_j over all generators, with the row
// transform U tracked so classes can be read off coordinates of w = U mu.
// diag[i] classifies coordinate i of w: 0 free, 1 dropped, d > 1 torsion
// modulo d.  torsion lists the d > 1 entries in divisibility order.
struct CoinvResult {
    unsigned free_rank = 0;
    std::vector<mpz_class> torsion;
    std::vector<mpz_class> U;    // r x r row-major unimodular
    std::vector<mpz_class> diag; // length r
};

CoinvResult coinvariants(const LatticeAction& act);

// Class of mu in the coinvariant lattice: free coordinates verbatim, torsion
// coordinates reduced to [0, d).
struct SpClass {
    std::vector<mpz_class> free;
    std::vector<std::pair<mpz_class, mpz_class>> torsion; // (value mod d, d)
    bool operator==(const SpClass&) const = default;
};

SpClass sp(const CoinvResult& coinv, const std::vector<mpz_class>& mu);
SpClass sp(const LatticeAction& act, const std::vector<mpz_class>& mu);

// Randomized functional checks: sp kills gamma*nu - nu, and every torsion
// class is reached by some small integer vector.
struct SurjectivityReport {
    bool torsion_classes_covered = true;
    bool coinvariance_ok = true;
    unsigned long long samples = 0;
};
SurjectivityReport verify_surjectivity(const LatticeAction& act, unsigned long long samples,
                                       std::uint64_t seed = 0x5eedULL);

// ---- independent cross-checks (used by the acceptance suite) ----

// Invariant factors from determinantal divisors: d_k = gcd(k-minors) /
// gcd((k-1)-minors).  No elimination, so independent of the SNF path.
struct QuotientShape {
    unsigned free_rank = 0;
    std::vector<mpz_class> torsion;
    bool operator==(const QuotientShape&) const = default;
};
QuotientShape coinvariants_by_minors(const LatticeAction& act);

// Column-HNF membership check of the projector over a bounding box:
// sp(mu) == sp(nu) must hold exactly when mu - nu lies in the relation
// lattice, for all pairs in [-box, box]^r.  index is the lattice index
// (product of HNF pivots) when the quotient is finite, 0 otherwise.
struct BoxCheck {
    bool faithful = true;
    mpz_class index = 0;
};
BoxCheck box_projector_check(const LatticeAction& act, const CoinvResult& coinv, long box);

} // namespace hqf
