#include "hqf/ring.hpp"

#include <string>

#include "hqf/errors.hpp"

namespace hqf {

namespace {

bool is_prime_u(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void check_same_ring(const RingSpec& r, const Scalar& a) {
    if (r.kind() == ring_kind::polytrunc && a.c.size() != r.precision())
        raise(errc::precision_mismatch, "scalar representative has the wrong length");
}

} // namespace

void RingSpec::finish_init() {
    // theta = 4*pi - t^2, recomputed from the stored canonical reps.
    Scalar four = s_from_int(*this, 4);
    theta_ = s_sub(*this, s_mul(*this, four, pi_), s_mul(*this, t_, t_));
    theta_val_ = s_val(*this, theta_);
}

ring_ptr RingSpec::make_zmod(unsigned p, unsigned prec, const mpz_class& t, const mpz_class& pi) {
    if (!is_prime_u(p)) raise(errc::parse_error, "p must be prime");
    if (prec < 1) raise(errc::parse_error, "precision must be at least 1");
    auto r = std::shared_ptr<RingSpec>(new RingSpec());
    r->kind_ = ring_kind::zmod;
    r->p_ = p;
    r->prec_ = prec;
    mpz_ui_pow_ui(r->modulus_.get_mpz_t(), p, prec);
    r->t_ = s_from_mpz(*r, t);
    r->pi_ = s_from_mpz(*r, pi);
    if (s_is_unit(*r, r->t_))
        raise(errc::constraint_violation, "t must be a non-unit (ramified extension)");
    if (s_is_unit(*r, r->pi_))
        raise(errc::constraint_violation, "pi must be a non-unit (nilpotent in the truncation)");
    r->finish_init();
    return r;
}

ring_ptr RingSpec::make_polytrunc(std::uint32_t q, unsigned prec, std::vector<std::uint32_t> t,
                                  std::vector<std::uint32_t> pi) {
    if (prec < 1) raise(errc::parse_error, "precision must be at least 1");
    auto r = std::shared_ptr<RingSpec>(new RingSpec());
    r->kind_ = ring_kind::polytrunc;
    r->fq_ = ff::field::make(q);
    r->p_ = r->fq_.p();
    r->prec_ = prec;
    for (auto v : t)
        if (v >= q) raise(errc::parse_error, "coefficient out of range for F_q");
    for (auto v : pi)
        if (v >= q) raise(errc::parse_error, "coefficient out of range for F_q");
    r->t_ = s_from_coeffs(*r, std::move(t));
    r->pi_ = s_from_coeffs(*r, std::move(pi));
    if (s_is_unit(*r, r->t_))
        raise(errc::constraint_violation, "t must be a non-unit (ramified extension)");
    if (s_is_unit(*r, r->pi_))
        raise(errc::constraint_violation, "pi must be a non-unit (nilpotent in the truncation)");
    r->finish_init();
    return r;
}

ring_ptr RingSpec::preset_q2i() { return make_zmod(2, 6, 2, 2); }
ring_ptr RingSpec::preset_q2sqrt2() { return make_zmod(2, 8, 0, -2); }

ring_ptr RingSpec::preset_qp_sqrt_p(unsigned p) {
    if (p == 2 || !is_prime_u(p)) raise(errc::parse_error, "preset needs an odd prime");
    return make_zmod(p, 5, 0, p);
}

bool RingSpec::operator==(const RingSpec& o) const noexcept {
    if (kind_ != o.kind_ || prec_ != o.prec_ || p_ != o.p_) return false;
    if (kind_ == ring_kind::polytrunc && !(fq_ == o.fq_)) return false;
    return t_ == o.t_ && pi_ == o.pi_;
}

ring_ptr change_precision(const RingSpec& r, unsigned new_prec) {
    if (new_prec < 1 || new_prec > r.precision())
        raise(errc::precision_mismatch, "change_precision only truncates");
    if (new_prec == r.precision()) {
        // Rebuild rather than alias: callers own distinct ring objects.
        if (r.kind() == ring_kind::zmod)
            return RingSpec::make_zmod(r.p(), new_prec, r.t().z, r.pi().z);
        return RingSpec::make_polytrunc(r.coeff_field().q(), new_prec, r.t().c, r.pi().c);
    }
    if (r.kind() == ring_kind::zmod)
        return RingSpec::make_zmod(r.p(), new_prec, r.t().z, r.pi().z);
    auto cut = [&](const std::vector<std::uint32_t>& c) {
        return std::vector<std::uint32_t>(c.begin(), c.begin() + new_prec);
    };
    return RingSpec::make_polytrunc(r.coeff_field().q(), new_prec, cut(r.t().c), cut(r.pi().c));
}

// ---- scalars ----

Scalar s_zero(const RingSpec& r) {
    Scalar s;
    if (r.kind() == ring_kind::polytrunc) s.c.assign(r.precision(), 0);
    return s;
}

Scalar s_one(const RingSpec& r) { return s_from_int(r, 1); }

Scalar s_from_int(const RingSpec& r, long v) {
    if (r.kind() == ring_kind::zmod) return s_from_mpz(r, mpz_class(v));
    Scalar s = s_zero(r);
    s.c[0] = r.coeff_field().from_int(v);
    return s;
}

Scalar s_from_mpz(const RingSpec& r, const mpz_class& v) {
    if (r.kind() != ring_kind::zmod)
        raise(errc::parse_error, "integer scalar in a polynomial ring");
    Scalar s;
    mpz_mod(s.z.get_mpz_t(), v.get_mpz_t(), r.modulus().get_mpz_t());
    return s;
}

Scalar s_from_coeffs(const RingSpec& r, std::vector<std::uint32_t> c) {
    if (r.kind() != ring_kind::polytrunc)
        raise(errc::parse_error, "coefficient-array scalar in an integer ring");
    if (c.size() > r.precision())
        raise(errc::precision_mismatch, "coefficient array longer than the precision");
    for (auto v : c)
        if (v >= r.coeff_field().q()) raise(errc::parse_error, "coefficient out of range for F_q");
    Scalar s;
    s.c = std::move(c);
    s.c.resize(r.precision(), 0);
    return s;
}

Scalar s_add(const RingSpec& r, const Scalar& a, const Scalar& b) {
    check_same_ring(r, a);
    check_same_ring(r, b);
    Scalar s;
    if (r.kind() == ring_kind::zmod) {
        s.z = a.z + b.z;
        if (s.z >= r.modulus()) s.z -= r.modulus();
        return s;
    }
    const auto& F = r.coeff_field();
    s.c.resize(r.precision());
    for (unsigned i = 0; i < r.precision(); ++i) s.c[i] = F.add(a.c[i], b.c[i]);
    return s;
}

Scalar s_neg(const RingSpec& r, const Scalar& a) {
    check_same_ring(r, a);
    Scalar s;
    if (r.kind() == ring_kind::zmod) {
        if (a.z != 0) s.z = r.modulus() - a.z;
        return s;
    }
    const auto& F = r.coeff_field();
    s.c.resize(r.precision());
    for (unsigned i = 0; i < r.precision(); ++i) s.c[i] = F.neg(a.c[i]);
    return s;
}

Scalar s_sub(const RingSpec& r, const Scalar& a, const Scalar& b) {
    return s_add(r, a, s_neg(r, b));
}

Scalar s_mul(const RingSpec& r, const Scalar& a, const Scalar& b) {
    check_same_ring(r, a);
    check_same_ring(r, b);
    Scalar s;
    if (r.kind() == ring_kind::zmod) {
        s.z = a.z * b.z;
        mpz_mod(s.z.get_mpz_t(), s.z.get_mpz_t(), r.modulus().get_mpz_t());
        return s;
    }
    const auto& F = r.coeff_field();
    unsigned N = r.precision();
    s.c.assign(N, 0);
    for (unsigned i = 0; i < N; ++i) {
        if (a.c[i] == 0) continue;
        for (unsigned j = 0; i + j < N; ++j)
            s.c[i + j] = F.add(s.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    return s;
}

bool s_is_zero(const RingSpec& r, const Scalar& a) { return a == s_zero(r); }

bool s_is_unit(const RingSpec& r, const Scalar& a) {
    if (r.kind() == ring_kind::zmod) return !mpz_divisible_ui_p(a.z.get_mpz_t(), r.p());
    check_same_ring(r, a);
    return a.c[0] != 0;
}

Scalar s_invert_unit(const RingSpec& r, const Scalar& a) {
    if (!s_is_unit(r, a)) raise(errc::not_a_unit, "scalar is not a unit");
    Scalar s;
    if (r.kind() == ring_kind::zmod) {
        if (!mpz_invert(s.z.get_mpz_t(), a.z.get_mpz_t(), r.modulus().get_mpz_t()))
            raise(errc::not_a_unit, "scalar is not a unit"); // unreachable after the check
        return s;
    }
    // Power-series inversion: b0 = a0^-1, then peel one coefficient at a time.
    const auto& F = r.coeff_field();
    unsigned N = r.precision();
    s.c.assign(N, 0);
    std::uint32_t inv0 = F.inv(a.c[0]);
    s.c[0] = inv0;
    for (unsigned k = 1; k < N; ++k) {
        std::uint32_t acc = 0;
        for (unsigned i = 1; i <= k; ++i) acc = F.add(acc, F.mul(a.c[i], s.c[k - i]));
        s.c[k] = F.neg(F.mul(inv0, acc));
    }
    return s;
}

unsigned s_val(const RingSpec& r, const Scalar& a) {
    if (r.kind() == ring_kind::zmod) {
        if (a.z == 0) return r.precision();
        mpz_class rest;
        mp_bitcnt_t v = mpz_remove(rest.get_mpz_t(), a.z.get_mpz_t(), mpz_class(r.p()).get_mpz_t());
        return std::min<unsigned>(unsigned(v), r.precision());
    }
    check_same_ring(r, a);
    for (unsigned i = 0; i < r.precision(); ++i)
        if (a.c[i] != 0) return i;
    return r.precision();
}

Scalar s_truncate(const RingSpec& dst, const RingSpec& src, const Scalar& a) {
    if (dst.kind() != src.kind() || dst.p() != src.p() || dst.precision() > src.precision())
        raise(errc::ring_mismatch, "truncation target does not match the source ring");
    if (dst.kind() == ring_kind::zmod) return s_from_mpz(dst, a.z);
    std::vector<std::uint32_t> c(a.c.begin(), a.c.begin() + dst.precision());
    return s_from_coeffs(dst, std::move(c));
}

Scalar s_lift(const RingSpec& dst, const RingSpec& src, const Scalar& a) {
    if (dst.kind() != src.kind() || dst.p() != src.p() || dst.precision() < src.precision())
        raise(errc::ring_mismatch, "lift target does not match the source ring");
    if (dst.kind() == ring_kind::zmod) return s_from_mpz(dst, a.z);
    return s_from_coeffs(dst, a.c);
}

// ---- quadratic extension ----

QElt q_zero(const RingSpec& r) { return {s_zero(r), s_zero(r)}; }
QElt q_one(const RingSpec& r) { return {s_one(r), s_zero(r)}; }
QElt q_from_scalar(const RingSpec& r, Scalar a) { return {std::move(a), s_zero(r)}; }
QElt q_from_parts(Scalar a, Scalar b) { return {std::move(a), std::move(b)}; }
QElt q_pi_elt(const RingSpec& r) { return {s_zero(r), s_one(r)}; }

QElt q_add(const RingSpec& r, const QElt& x, const QElt& y) {
    return {s_add(r, x.a, y.a), s_add(r, x.b, y.b)};
}

QElt q_sub(const RingSpec& r, const QElt& x, const QElt& y) {
    return {s_sub(r, x.a, y.a), s_sub(r, x.b, y.b)};
}

QElt q_neg(const RingSpec& r, const QElt& x) { return {s_neg(r, x.a), s_neg(r, x.b)}; }

QElt q_scale(const RingSpec& r, const Scalar& c, const QElt& x) {
    return {s_mul(r, c, x.a), s_mul(r, c, x.b)};
}

bool q_is_zero(const RingSpec& r, const QElt& x) {
    return s_is_zero(r, x.a) && s_is_zero(r, x.b);
}

QElt qext_mul(const RingSpec& r, const QElt& x, const QElt& y) {
    Scalar a = s_sub(r, s_mul(r, x.a, y.a), s_mul(r, r.pi(), s_mul(r, x.b, y.b)));
    Scalar b = s_add(r, s_add(r, s_mul(r, x.a, y.b), s_mul(r, x.b, y.a)),
                     s_mul(r, r.t(), s_mul(r, x.b, y.b)));
    return {std::move(a), std::move(b)};
}

QElt qext_conj(const RingSpec& r, const QElt& x) {
    return {s_add(r, x.a, s_mul(r, r.t(), x.b)), s_neg(r, x.b)};
}

Scalar qext_norm(const RingSpec& r, const QElt& x) {
    // N(a + b Pi) = a^2 + t a b + pi b^2
    Scalar n = s_mul(r, x.a, x.a);
    n = s_add(r, n, s_mul(r, r.t(), s_mul(r, x.a, x.b)));
    return s_add(r, n, s_mul(r, r.pi(), s_mul(r, x.b, x.b)));
}

Scalar qext_trace(const RingSpec& r, const QElt& x) {
    return s_add(r, s_add(r, x.a, x.a), s_mul(r, r.t(), x.b));
}

std::pair<Scalar, Scalar> qext_norm_trace(const RingSpec& r, const QElt& x) {
    return {qext_norm(r, x), qext_trace(r, x)};
}

bool q_is_unit(const RingSpec& r, const QElt& x) { return s_is_unit(r, qext_norm(r, x)); }

QElt invert_unit(const RingSpec& r, const QElt& x) {
    Scalar ninv = s_invert_unit(r, qext_norm(r, x)); // raises not_a_unit
    return q_scale(r, ninv, qext_conj(r, x));
}

// ---- matrices ----

QMatrix qmat_identity(const RingSpec& r, unsigned n) {
    QMatrix m;
    m.n = n;
    m.e.assign(std::size_t(n) * n, q_zero(r));
    for (unsigned i = 0; i < n; ++i) m.at(i, i) = q_one(r);
    return m;
}

QMatrix qmat_mul(const RingSpec& r, const QMatrix& x, const QMatrix& y) {
    if (x.n != y.n) raise(errc::rank_mismatch, "matrix sizes differ");
    QMatrix m;
    m.n = x.n;
    m.e.assign(std::size_t(x.n) * x.n, q_zero(r));
    for (unsigned i = 0; i < x.n; ++i)
        for (unsigned k = 0; k < x.n; ++k) {
            if (q_is_zero(r, x.at(i, k))) continue;
            for (unsigned j = 0; j < x.n; ++j)
                m.at(i, j) = q_add(r, m.at(i, j), qext_mul(r, x.at(i, k), y.at(k, j)));
        }
    return m;
}

HVector qmat_apply(const RingSpec& r, const QMatrix& m, const HVector& v) {
    if (m.n != v.size()) raise(errc::rank_mismatch, "matrix/vector sizes differ");
    HVector out(m.n, q_zero(r));
    for (unsigned i = 0; i < m.n; ++i)
        for (unsigned j = 0; j < m.n; ++j)
            out[i] = q_add(r, out[i], qext_mul(r, m.at(i, j), v[j]));
    return out;
}

QMatrix qmat_inverse(const RingSpec& r, const QMatrix& m) {
    unsigned n = m.n;
    QMatrix a = m, inv = qmat_identity(r, n);
    for (unsigned col = 0; col < n; ++col) {
        unsigned piv = n;
        for (unsigned row = col; row < n; ++row)
            if (q_is_unit(r, a.at(row, col))) {
                piv = row;
                break;
            }
        if (piv == n) raise(errc::not_a_unit, "matrix is not invertible over the extension");
        if (piv != col)
            for (unsigned j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        QElt pinv = invert_unit(r, a.at(col, col));
        for (unsigned j = 0; j < n; ++j) {
            a.at(col, j) = qext_mul(r, pinv, a.at(col, j));
            inv.at(col, j) = qext_mul(r, pinv, inv.at(col, j));
        }
        for (unsigned row = 0; row < n; ++row) {
            if (row == col || q_is_zero(r, a.at(row, col))) continue;
            QElt f = a.at(row, col);
            for (unsigned j = 0; j < n; ++j) {
                a.at(row, j) = q_sub(r, a.at(row, j), qext_mul(r, f, a.at(col, j)));
                inv.at(row, j) = q_sub(r, inv.at(row, j), qext_mul(r, f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

} // namespace hqf
