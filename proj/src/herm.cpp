#include "hqf/herm.hpp"

#include <string>

#include "hqf/errors.hpp"

namespace hqf {

HermForm HermForm::from_matrices(ring_ptr ring, std::vector<Scalar> A, std::vector<Scalar> B) {
    if (!ring) raise(errc::parse_error, "null ring");
    std::size_t nn = A.size();
    unsigned n = 0;
    while (std::size_t(n) * n < nn) ++n;
    if (std::size_t(n) * n != nn || n == 0 || B.size() != nn)
        raise(errc::constraint_violation, "A and B must be square matrices of equal positive size");
    const RingSpec& r = *ring;
    auto at = [n](const std::vector<Scalar>& m, unsigned i, unsigned j) -> const Scalar& {
        return m[std::size_t(i) * n + j];
    };
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            if (i < j && !(at(A, i, j) == at(A, j, i)))
                raise(errc::constraint_violation,
                      "A is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) +
                          ")");
            if (i == j && !(at(B, i, i) == s_mul(r, r.t(), at(A, i, i))))
                raise(errc::constraint_violation,
                      "B_ii = t*A_ii fails at i=" + std::to_string(i));
            if (i < j) {
                Scalar lhs = s_add(r, at(B, i, j), at(B, j, i));
                if (!(lhs == s_mul(r, r.t(), at(A, i, j))))
                    raise(errc::constraint_violation, "B_ij + B_ji = t*A_ij fails at (" +
                                                          std::to_string(i) + "," +
                                                          std::to_string(j) + ")");
            }
        }
    HermForm f;
    f.ring_ = std::move(ring);
    f.n_ = n;
    f.A_ = std::move(A);
    f.B_ = std::move(B);
    return f;
}

Scalar eval_q(const HermForm& form, const HVector& m) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    if (m.size() != n) raise(errc::rank_mismatch, "vector length differs from the form rank");
    Scalar acc = s_zero(r);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) {
            Scalar xx = s_mul(r, m[i].a, m[j].a);
            Scalar yy = s_mul(r, r.pi(), s_mul(r, m[i].b, m[j].b));
            acc = s_add(r, acc, s_mul(r, form.A(i, j), s_add(r, xx, yy)));
        }
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            acc = s_add(r, acc, s_mul(r, form.B(i, j), s_mul(r, m[i].a, m[j].b)));
    return acc;
}

Scalar bilinear_f(const HermForm& form, const HVector& m, const HVector& w) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    if (m.size() != n || w.size() != n)
        raise(errc::rank_mismatch, "vector length differs from the form rank");
    // f(m,w) = x^T Atil x' + x^T B y' + y^T B^T x' + pi * y^T Atil y'
    // with Atil_ii = 2 A_ii, Atil_ij = A_ij.
    Scalar acc = s_zero(r);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            Scalar atil = form.A(i, j);
            if (i == j) atil = s_add(r, atil, atil);
            Scalar c = s_mul(r, m[i].a, w[j].a);
            c = s_add(r, c, s_mul(r, r.pi(), s_mul(r, m[i].b, w[j].b)));
            acc = s_add(r, acc, s_mul(r, atil, c));
            acc = s_add(r, acc, s_mul(r, form.B(i, j), s_mul(r, m[i].a, w[j].b)));
            acc = s_add(r, acc, s_mul(r, form.B(i, j), s_mul(r, w[i].a, m[j].b)));
        }
    return acc;
}

Scalar pairing_pi(const HermForm& form, const HVector& m, const HVector& w) {
    const RingSpec& r = form.ring();
    HVector pw(w.size());
    QElt pi_elt = q_pi_elt(r);
    for (std::size_t i = 0; i < w.size(); ++i) pw[i] = qext_mul(r, pi_elt, w[i]);
    return bilinear_f(form, m, pw);
}

bool admits_unit_pairing(const HermForm& form) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    std::vector<HVector> basis;
    for (unsigned k = 0; k < 2 * n; ++k) {
        HVector v(n, q_from_parts(s_zero(r), s_zero(r)));
        v[k % n] = k < n ? q_from_parts(s_one(r), s_zero(r)) : q_from_parts(s_zero(r), s_one(r));
        basis.push_back(std::move(v));
    }
    for (const HVector& u : basis)
        for (const HVector& v : basis)
            if (s_is_unit(r, pairing_pi(form, u, v))) return true;
    return false;
}

std::vector<Scalar> gram_matrix(const HermForm& form) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    std::size_t N2 = std::size_t(2) * n;
    std::vector<Scalar> g(N2 * N2, s_zero(r));
    auto set = [&](unsigned i, unsigned j, const Scalar& v) { g[std::size_t(i) * N2 + j] = v; };
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            Scalar atil = form.A(i, j);
            if (i == j) atil = s_add(r, atil, atil);
            set(i, j, atil);
            set(i, n + j, form.B(i, j));
            set(n + i, j, form.B(j, i)); // t*Atil - B = B^T by the constraint
            set(n + i, n + j, s_mul(r, r.pi(), atil));
        }
    return g;
}

HermForm standard_form(ring_ptr ring, unsigned n) {
    if (n < 1) raise(errc::rank_mismatch, "rank must be at least 1");
    const RingSpec& r = *ring;
    std::vector<Scalar> A(std::size_t(n) * n, s_zero(r));
    std::vector<Scalar> B(std::size_t(n) * n, s_zero(r));
    auto at = [n](std::vector<Scalar>& m, unsigned i, unsigned j) -> Scalar& {
        return m[std::size_t(i) * n + j];
    };
    for (unsigned k = 0; k + 1 < n; k += 2) {
        at(B, k, k + 1) = s_one(r);
        at(B, k + 1, k) = s_neg(r, s_one(r));
    }
    if (n % 2 == 1) {
        at(A, n - 1, n - 1) = s_one(r);
        at(B, n - 1, n - 1) = r.t();
    }
    return HermForm::from_matrices(std::move(ring), std::move(A), std::move(B));
}

HermForm orthogonal_sum(const HermForm& f1, const HermForm& f2) {
    if (!(f1.ring() == f2.ring())) raise(errc::ring_mismatch, "orthogonal sum over unequal rings");
    const RingSpec& r = f1.ring();
    unsigned n1 = f1.rank(), n2 = f2.rank(), n = n1 + n2;
    std::vector<Scalar> A(std::size_t(n) * n, s_zero(r));
    std::vector<Scalar> B(std::size_t(n) * n, s_zero(r));
    for (unsigned i = 0; i < n1; ++i)
        for (unsigned j = 0; j < n1; ++j) {
            A[std::size_t(i) * n + j] = f1.A(i, j);
            B[std::size_t(i) * n + j] = f1.B(i, j);
        }
    for (unsigned i = 0; i < n2; ++i)
        for (unsigned j = 0; j < n2; ++j) {
            A[std::size_t(n1 + i) * n + (n1 + j)] = f2.A(i, j);
            B[std::size_t(n1 + i) * n + (n1 + j)] = f2.B(i, j);
        }
    return HermForm::from_matrices(f1.ring_handle(), std::move(A), std::move(B));
}

HermForm pullback(const HermForm& form, const QMatrix& S) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    if (S.n != n) raise(errc::rank_mismatch, "basis matrix size differs from the form rank");
    std::vector<HVector> cols(n, HVector(n));
    for (unsigned j = 0; j < n; ++j)
        for (unsigned i = 0; i < n; ++i) cols[j][i] = S.at(i, j);
    std::vector<Scalar> A(std::size_t(n) * n, s_zero(r));
    std::vector<Scalar> B(std::size_t(n) * n, s_zero(r));
    auto at = [n](std::vector<Scalar>& m, unsigned i, unsigned j) -> Scalar& {
        return m[std::size_t(i) * n + j];
    };
    for (unsigned i = 0; i < n; ++i) at(A, i, i) = eval_q(form, cols[i]);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i + 1; j < n; ++j) {
            Scalar aij = bilinear_f(form, cols[i], cols[j]);
            at(A, i, j) = aij;
            at(A, j, i) = aij;
        }
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            if (i == j)
                at(B, i, i) = s_mul(r, r.t(), at(A, i, i));
            else
                at(B, i, j) = pairing_pi(form, cols[i], cols[j]);
        }
    return HermForm::from_matrices(form.ring_handle(), std::move(A), std::move(B));
}

HermForm scale_form(const HermForm& form, const Scalar& u) {
    const RingSpec& r = form.ring();
    std::vector<Scalar> A(form.A_flat()), B(form.B_flat());
    for (auto& v : A) v = s_mul(r, u, v);
    for (auto& v : B) v = s_mul(r, u, v);
    return HermForm::from_matrices(form.ring_handle(), std::move(A), std::move(B));
}

HermForm truncate_form(ring_ptr low, const HermForm& form) {
    const RingSpec& src = form.ring();
    std::vector<Scalar> A(form.A_flat()), B(form.B_flat());
    for (auto& v : A) v = s_truncate(*low, src, v);
    for (auto& v : B) v = s_truncate(*low, src, v);
    return HermForm::from_matrices(std::move(low), std::move(A), std::move(B));
}

HermForm random_valid_form(ring_ptr ring, unsigned n, Rng& g) {
    const RingSpec& r = *ring;
    std::vector<Scalar> A(std::size_t(n) * n, s_zero(r));
    std::vector<Scalar> B(std::size_t(n) * n, s_zero(r));
    auto at = [n](std::vector<Scalar>& m, unsigned i, unsigned j) -> Scalar& {
        return m[std::size_t(i) * n + j];
    };
    for (unsigned i = 0; i < n; ++i) {
        at(A, i, i) = random_scalar(r, g);
        for (unsigned j = i + 1; j < n; ++j) {
            Scalar v = random_scalar(r, g);
            at(A, i, j) = v;
            at(A, j, i) = v;
        }
    }
    for (unsigned i = 0; i < n; ++i) {
        at(B, i, i) = s_mul(r, r.t(), at(A, i, i));
        for (unsigned j = i + 1; j < n; ++j) {
            Scalar v = random_scalar(r, g);
            at(B, i, j) = v;
            at(B, j, i) = s_sub(r, s_mul(r, r.t(), at(A, i, j)), v);
        }
    }
    return HermForm::from_matrices(std::move(ring), std::move(A), std::move(B));
}

} // namespace hqf
