#pragma once

#include <vector>

#include "hqf/ring.hpp"
#include "hqf/rng.hpp"

namespace hqf {

// Hermitian quadratic form of rank n over the extension, stored in the
// (A, B) parameterization:
//   A symmetric; B_ii = t*A_ii; B_ij + B_ji = t*A_ij for i != j.
// For m = sum (x_i + y_i Pi) e_i,
//   q(m) = sum_{i<=j} A_ij (x_i x_j + pi y_i y_j) + sum_{i,j} B_ij x_i y_j.
// A stores q(e_i) on the diagonal — never f(e_i,e_i)/2 — which is what keeps
// residue characteristic 2 exact.
class HermForm {
public:
    // Validates the three constraints; raises constraint_violation naming the
    // failed constraint and indices.
    static HermForm from_matrices(ring_ptr ring, std::vector<Scalar> A, std::vector<Scalar> B);

    const RingSpec& ring() const noexcept { return *ring_; }
    const ring_ptr& ring_handle() const noexcept { return ring_; }
    unsigned rank() const noexcept { return n_; }
    const Scalar& A(unsigned i, unsigned j) const { return A_[std::size_t(i) * n_ + j]; }
    const Scalar& B(unsigned i, unsigned j) const { return B_[std::size_t(i) * n_ + j]; }
    const std::vector<Scalar>& A_flat() const noexcept { return A_; }
    const std::vector<Scalar>& B_flat() const noexcept { return B_; }

    bool operator==(const HermForm& o) const {
        return *ring_ == *o.ring_ && n_ == o.n_ && A_ == o.A_ && B_ == o.B_;
    }

private:
    HermForm() = default;
    ring_ptr ring_;
    unsigned n_ = 0;
    std::vector<Scalar> A_, B_; // row-major n×n
};

// Exact value of q at a coordinate vector over the extension.
Scalar eval_q(const HermForm& form, const HVector& m);
// f(m,w) = q(m+w) - q(m) - q(w), computed directly from the Gram blocks.
Scalar bilinear_f(const HermForm& form, const HVector& m, const HVector& w);
// Convenience for the pairing f(m, Pi*w) that drives pivot search.
Scalar pairing_pi(const HermForm& form, const HVector& m, const HVector& w);
// Whether some pair of R-basis vectors pairs to a unit.  pairing_pi is
// R-bilinear, so this decides whether any unit pairing exists at all; it can
// fail for valid forms at p = 2, where the pairing may vanish identically
// modulo the maximal ideal.
bool admits_unit_pairing(const HermForm& form);
// Symmetric 2n x 2n matrix of f in the ordered R-basis (e_1..e_n, Pi e_1..Pi e_n).
std::vector<Scalar> gram_matrix(const HermForm& form);

// r copies of the standard rank-2 block, plus one norm-form block for odd n.
HermForm standard_form(ring_ptr ring, unsigned n);
HermForm orthogonal_sum(const HermForm& f1, const HermForm& f2);

// q'(m) = q(S m): the form in the basis whose j-th vector is column j of S.
HermForm pullback(const HermForm& form, const QMatrix& S);
// u*q for a base-ring scalar u (the constraints are linear in (A, B)).
HermForm scale_form(const HermForm& form, const Scalar& u);
// Entry-wise reduction to a lower-precision ring with the same parameters.
HermForm truncate_form(ring_ptr low, const HermForm& form);

// Uniformly random valid (A, B): free entries random, bound entries derived.
HermForm random_valid_form(ring_ptr ring, unsigned n, Rng& g);

} // namespace hqf
