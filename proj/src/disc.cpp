#include "hqf/disc.hpp"

#include "hqf/errors.hpp"

namespace hqf {

namespace {

// ---- exact lift domains for fraction-free elimination ----

struct zdom {
    using elt = mpz_class;
    elt zero() const { return 0; }
    elt one() const { return 1; }
    bool is_zero(const elt& a) const { return a == 0; }
    elt neg(const elt& a) const { return -a; }
    elt add(const elt& a, const elt& b) const { return a + b; }
    elt sub(const elt& a, const elt& b) const { return a - b; }
    elt mul(const elt& a, const elt& b) const { return a * b; }
    // Exact inside Bareiss by the Sylvester identity; checked defensively.
    elt divexact(const elt& a, const elt& b) const {
        mpz_class q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        if (r != 0) raise(errc::not_divisible, "inexact division in the integer lift");
        return q;
    }
};

// Polynomials over F_q, little-endian, trailing zeros trimmed ("empty" = 0).
struct pdom {
    const ff::field* F;
    using elt = std::vector<std::uint32_t>;

    static void trim(elt& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }

    elt zero() const { return {}; }
    elt one() const { return {1}; }
    bool is_zero(const elt& a) const { return a.empty(); }
    elt neg(const elt& a) const {
        elt r = a;
        for (auto& v : r) v = F->neg(v);
        return r;
    }
    elt add(const elt& a, const elt& b) const {
        elt r = a;
        if (r.size() < b.size()) r.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = F->add(r[i], b[i]);
        trim(r);
        return r;
    }
    elt sub(const elt& a, const elt& b) const { return add(a, neg(b)); }
    elt mul(const elt& a, const elt& b) const {
        if (a.empty() || b.empty()) return {};
        elt r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
        }
        return r;
    }
    elt divexact(const elt& a, const elt& b) const {
        if (b.empty()) raise(errc::not_divisible, "division by zero in the polynomial lift");
        if (a.empty()) return {};
        if (a.size() < b.size())
            raise(errc::not_divisible, "inexact division in the polynomial lift");
        elt rem = a, q(a.size() - b.size() + 1, 0);
        std::uint32_t lead_inv = F->inv(b.back());
        for (std::size_t k = q.size(); k-- > 0;) {
            std::size_t top = b.size() - 1 + k;
            std::uint32_t c = top < rem.size() ? F->mul(rem[top], lead_inv) : 0;
            q[k] = c;
            if (c == 0) continue;
            for (std::size_t i = 0; i < b.size(); ++i)
                rem[i + k] = F->sub(rem[i + k], F->mul(c, b[i]));
            trim(rem);
        }
        if (!rem.empty()) raise(errc::not_divisible, "inexact division in the polynomial lift");
        return q;
    }
};

template <class D>
typename D::elt bareiss_det(const D& d, std::vector<typename D::elt> a, unsigned n) {
    using E = typename D::elt;
    if (n == 0) return d.one();
    auto at = [&a, n](unsigned i, unsigned j) -> E& { return a[std::size_t(i) * n + j]; };
    E prev = d.one();
    bool negate = false;
    for (unsigned k = 0; k + 1 < n; ++k) {
        if (d.is_zero(at(k, k))) {
            unsigned r = k + 1;
            while (r < n && d.is_zero(at(r, k))) ++r;
            if (r == n) return d.zero(); // leading columns dependent
            for (unsigned j = k; j < n; ++j) std::swap(at(k, j), at(r, j));
            negate = !negate;
        }
        for (unsigned i = k + 1; i < n; ++i)
            for (unsigned j = k + 1; j < n; ++j)
                at(i, j) =
                    d.divexact(d.sub(d.mul(at(i, j), at(k, k)), d.mul(at(i, k), at(k, j))), prev);
        prev = at(k, k);
    }
    E det = at(n - 1, n - 1);
    return negate ? d.neg(det) : det;
}

// 2n x 2n Gram matrix in the lift, with the (A, B) constraints substituted
// *in the lift*: that is what makes the determinant exactly divisible by
// theta_lift = 4*pi_lift - t_lift^2 for odd n (universal polynomial identity
// in Z[t, pi, A, B], checked as a property test).
template <class D, class Lift>
std::vector<typename D::elt> lift_gram(const D& d, const HermForm& form, Lift lift) {
    using E = typename D::elt;
    unsigned n = form.rank();
    E tL = lift(form.ring().t()), piL = lift(form.ring().pi());
    std::vector<E> AL(std::size_t(n) * n), BL(std::size_t(n) * n);
    auto al = [&](unsigned i, unsigned j) -> E& { return AL[std::size_t(i) * n + j]; };
    auto bl = [&](unsigned i, unsigned j) -> E& { return BL[std::size_t(i) * n + j]; };
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) {
            al(i, j) = lift(form.A(i, j));
            if (i != j) al(j, i) = al(i, j);
        }
    for (unsigned i = 0; i < n; ++i) {
        bl(i, i) = d.mul(tL, al(i, i));
        for (unsigned j = i + 1; j < n; ++j) {
            bl(i, j) = lift(form.B(i, j));
            bl(j, i) = d.sub(d.mul(tL, al(i, j)), bl(i, j));
        }
    }
    std::size_t m = std::size_t(2) * n;
    std::vector<E> G(m * m);
    auto g = [&](unsigned i, unsigned j) -> E& { return G[i * m + j]; };
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            E atil = al(i, j);
            if (i == j) atil = d.add(atil, atil);
            g(i, j) = atil;
            g(i, n + j) = bl(i, j);
            g(n + i, j) = bl(j, i); // t*Atil - B = B^T in the lift by construction
            g(n + i, n + j) = d.mul(piL, atil);
        }
    return G;
}

Scalar reduce_z(const RingSpec& r, const mpz_class& v, unsigned prec) {
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), r.p(), prec);
    mpz_class red;
    mpz_mod(red.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    return s_from_mpz(r, red); // rep < p^prec <= p^N, canonical in the full ring
}

Scalar reduce_p(const RingSpec& r, const pdom::elt& v, unsigned prec) {
    std::vector<std::uint32_t> c(r.precision(), 0);
    for (std::size_t i = 0; i < v.size() && i < prec; ++i) c[i] = v[i];
    return s_from_coeffs(r, std::move(c));
}

} // namespace

DiscResult disc(const HermForm& form) {
    const RingSpec& r = form.ring();
    unsigned m = 2 * form.rank();
    Scalar value;
    if (r.kind() == ring_kind::zmod) {
        zdom d;
        auto det = bareiss_det(d, lift_gram(d, form, [](const Scalar& s) { return s.z; }), m);
        value = reduce_z(r, det, r.precision());
    } else {
        pdom d{&r.coeff_field()};
        auto det = bareiss_det(d, lift_gram(d, form,
                                            [](const Scalar& s) {
                                                pdom::elt e = s.c;
                                                pdom::trim(e);
                                                return e;
                                            }),
                               m);
        value = reduce_p(r, det, r.precision());
    }
    return {std::move(value), r.precision(), false};
}

DiscResult disc_divided(const HermForm& form) {
    const RingSpec& r = form.ring();
    if (form.rank() % 2 == 0)
        raise(errc::even_rank, "divided discriminant is only defined for odd rank");
    unsigned e = r.theta_val();
    if (e >= r.precision())
        raise(errc::insufficient_precision,
              "theta vanishes at the working precision; the division is not determined");
    unsigned m = 2 * form.rank();
    Scalar value;
    if (r.kind() == ring_kind::zmod) {
        zdom d;
        auto det = bareiss_det(d, lift_gram(d, form, [](const Scalar& s) { return s.z; }), m);
        mpz_class theta_lift = 4 * r.pi().z - r.t().z * r.t().z;
        mpz_class q, rest;
        mpz_tdiv_qr(q.get_mpz_t(), rest.get_mpz_t(), det.get_mpz_t(), theta_lift.get_mpz_t());
        if (rest != 0)
            raise(errc::not_divisible, "Gram determinant is not divisible by theta "
                                       "(input violates the form constraints)");
        value = reduce_z(r, q, r.precision() - e);
    } else {
        pdom d{&r.coeff_field()};
        auto lift = [](const Scalar& s) {
            pdom::elt e2 = s.c;
            pdom::trim(e2);
            return e2;
        };
        auto det = bareiss_det(d, lift_gram(d, form, lift), m);
        pdom::elt four = d.one();
        four = d.add(four, four);
        four = d.add(four, four); // 4 as an F_q constant (may be 0 in char 2)
        pdom::elt theta_lift = d.sub(d.mul(four, lift(r.pi())), d.mul(lift(r.t()), lift(r.t())));
        value = reduce_p(r, d.divexact(det, theta_lift), r.precision() - e);
    }
    return {std::move(value), r.precision() - e, true};
}

bool is_nondegenerate(const HermForm& form) {
    DiscResult d = form.rank() % 2 == 0 ? disc(form) : disc_divided(form);
    return s_is_unit(form.ring(), d.value);
}

Scalar det_scalar_matrix(const RingSpec& r, const std::vector<Scalar>& m, unsigned dim) {
    if (m.size() != std::size_t(dim) * dim) raise(errc::rank_mismatch, "matrix is not square");
    if (r.kind() == ring_kind::zmod) {
        zdom d;
        std::vector<mpz_class> a(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) a[i] = m[i].z;
        return reduce_z(r, bareiss_det(d, std::move(a), dim), r.precision());
    }
    pdom d{&r.coeff_field()};
    std::vector<pdom::elt> a(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        a[i] = m[i].c;
        pdom::trim(a[i]);
    }
    return reduce_p(r, bareiss_det(d, std::move(a), dim), r.precision());
}

} // namespace hqf
