#include "hqf/reduce.hpp"

#include <string>

#include "hqf/errors.hpp"

namespace hqf {

namespace {

unsigned newton_budget(unsigned prec) {
    unsigned k = 0;
    while ((1u << k) < prec) ++k; // ceil(log2 prec)
    return k + 2;
}

HVector scale_vec(const RingSpec& r, const QElt& c, const HVector& v) {
    HVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = qext_mul(r, c, v[i]);
    return out;
}

HVector add_scaled(const RingSpec& r, const HVector& v, const QElt& c, const HVector& w) {
    HVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = q_add(r, v[i], qext_mul(r, c, w[i]));
    return out;
}

// Subtract the component of v lying in the pair's extension span, using the
// self-inverse standard 4x4 block: coefficients are mu^{-1} * G_std * phi
// where phi = (f(v,x), f(v,y), f(v,Pi x), f(v,Pi y)).
HVector project_out(const HermForm& form, const HVector& v, const HVector& x, const HVector& y,
                    const Scalar& mu_inv) {
    const RingSpec& r = form.ring();
    Scalar phi0 = bilinear_f(form, v, x);
    Scalar phi1 = bilinear_f(form, v, y);
    Scalar phi2 = pairing_pi(form, v, x);
    Scalar phi3 = pairing_pi(form, v, y);
    // G_std * phi = (phi3, -phi2, -phi1, phi0)
    Scalar c0 = s_mul(r, mu_inv, phi3);
    Scalar c1 = s_neg(r, s_mul(r, mu_inv, phi2));
    Scalar c2 = s_neg(r, s_mul(r, mu_inv, phi1));
    Scalar c3 = s_mul(r, mu_inv, phi0);
    QElt cx = q_from_parts(c0, c2); // (c0 + c2 Pi) x
    QElt cy = q_from_parts(c1, c3); // (c1 + c3 Pi) y
    HVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        QElt drop = q_add(r, qext_mul(r, cx, x[i]), qext_mul(r, cy, y[i]));
        out[i] = q_sub(r, v[i], drop);
    }
    return out;
}

void mul_row(const RingSpec& r, QMatrix& t, unsigned row, const QElt& c) {
    for (unsigned j = 0; j < t.n; ++j) t.at(row, j) = qext_mul(r, c, t.at(row, j));
}

void add_row(const RingSpec& r, QMatrix& t, unsigned dst, const QElt& c, unsigned src) {
    for (unsigned j = 0; j < t.n; ++j)
        t.at(dst, j) = q_add(r, t.at(dst, j), qext_mul(r, c, t.at(src, j)));
}

} // namespace

PairResult pair_engine(const HermForm& form, HVector x, HVector y, const Scalar& mu) {
    const RingSpec& r = form.ring();
    if (!s_is_unit(r, mu)) raise(errc::bad_pairing, "target pairing is not a unit");
    if (!(pairing_pi(form, x, y) == mu))
        raise(errc::bad_pairing, "f(x, Pi y) differs from the target pairing");
    Scalar mu_inv = s_invert_unit(r, mu);
    QMatrix T = qmat_identity(r, 2);

    // (1) Newton: solve q(x + rho Pi y) = q(x) + rho mu + rho^2 pi q(y) = 0,
    // starting from rho = -q(x) mu^{-1}; the residual squares into deeper
    // powers of pi each step, so it hits exactly zero.
    Scalar qx = eval_q(form, x), qy = eval_q(form, y);
    Scalar piqy = s_mul(r, r.pi(), qy);
    Scalar rho = s_neg(r, s_mul(r, qx, mu_inv));
    unsigned budget = newton_budget(r.precision());
    unsigned iters = 0;
    for (;;) {
        Scalar g = s_add(r, qx, s_add(r, s_mul(r, rho, mu), s_mul(r, s_mul(r, rho, rho), piqy)));
        if (s_is_zero(r, g)) break;
        if (iters >= budget)
            raise(errc::newton_divergence,
                  "isotropy residual still nonzero after " + std::to_string(budget) + " steps");
        Scalar two_rho = s_add(r, rho, rho);
        Scalar deriv = s_add(r, mu, s_mul(r, two_rho, piqy)); // unit: mu + nilpotent
        rho = s_sub(r, rho, s_mul(r, g, s_invert_unit(r, deriv)));
        ++iters;
    }
    QElt rho_pi = q_from_parts(s_zero(r), rho); // rho * Pi
    x = add_scaled(r, x, rho_pi, y);
    add_row(r, T, 0, rho_pi, 1);

    // (2) Rescale x by the live pairing: f(x, Pi y) = mu + rho pi f(y,y) after
    // step 1, and dividing by (live/mu) restores the pairing exactly while
    // q(x) stays zero (it scales by the square).
    Scalar live = pairing_pi(form, x, y);
    QElt c = q_from_scalar(r, s_mul(r, mu, s_invert_unit(r, live)));
    x = scale_vec(r, c, x);
    mul_row(r, T, 0, c);

    // (3) y-isotropy: y <- y + s Pi^* x with s = -q(y) mu^{-1}; the pairing
    // is untouched because f(x, Pi Pi^* x) = pi f(x,x) = 2 pi q(x) = 0.
    Scalar s_step = s_neg(r, s_mul(r, eval_q(form, y), mu_inv));
    QElt pistar = q_from_parts(r.t(), s_neg(r, s_one(r))); // conj(Pi) = t - Pi
    QElt spk = qext_mul(r, q_from_scalar(r, s_step), pistar);
    y = add_scaled(r, y, spk, x);
    add_row(r, T, 1, spk, 0);

    // (4) Kill the cross pairing f(x, y) with x <- (a + b Pi^*) x:
    // a = mu / (mu - f(x,y) f(x, Pi^2 y) mu^{-1}), b = -a f(x,y) mu^{-1}.
    Scalar fxy = bilinear_f(form, x, y);
    HVector pi_y = scale_vec(r, q_pi_elt(r), y);
    Scalar fxppy = pairing_pi(form, x, pi_y); // f(x, Pi^2 y)
    Scalar denom = s_sub(r, mu, s_mul(r, s_mul(r, fxy, fxppy), mu_inv));
    Scalar a = s_mul(r, mu, s_invert_unit(r, denom)); // denom = mu + nilpotent
    Scalar b = s_neg(r, s_mul(r, s_mul(r, a, fxy), mu_inv));
    QElt ab = q_add(r, q_from_scalar(r, a), qext_mul(r, q_from_scalar(r, b), pistar));
    x = scale_vec(r, ab, x);
    mul_row(r, T, 0, ab);

    return {std::move(x), std::move(y), std::move(T), iters};
}

IsotropicPair make_isotropic_pair(const HermForm& form, const HVector& x, const HVector& y) {
    PairResult out = pair_engine(form, x, y, s_one(form.ring()));
    return {std::move(out.x), std::move(out.y)};
}

std::vector<Scalar> pair_gram(const HermForm& form, const HVector& x, const HVector& y) {
    const RingSpec& r = form.ring();
    HVector px = scale_vec(r, q_pi_elt(r), x);
    HVector py = scale_vec(r, q_pi_elt(r), y);
    const HVector* w[4] = {&x, &y, &px, &py};
    std::vector<Scalar> g(16, s_zero(r));
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j) g[std::size_t(i) * 4 + j] = bilinear_f(form, *w[i], *w[j]);
    return g;
}

bool is_similitude(const HermForm& src, const HermForm& dst, const Similitude& s) {
    if (!(src.ring() == dst.ring()) || src.rank() != dst.rank()) return false;
    if (s.gamma1.n != src.rank()) return false;
    if (!s_is_unit(src.ring(), s.gamma2)) return false;
    try {
        HermForm pulled = pullback(dst, s.gamma1);
        return pulled == scale_form(src, s.gamma2);
    } catch (const hqf_error&) {
        return false;
    }
}

Similitude reduce_to_standard(const HermForm& form) {
    const RingSpec& r = form.ring();
    unsigned n = form.rank();
    // Degeneracy is detected where the algorithm actually needs it — a unit
    // pivot for each hyperbolic split, a unit value for the odd terminal
    // vector — rather than through the divided discriminant, which is not
    // determined at precisions where theta vanishes.

    std::vector<HVector> work(n, HVector(n, q_zero(r)));
    for (unsigned i = 0; i < n; ++i) work[i][i] = q_one(r);
    std::vector<HVector> out(n);

    Scalar one = s_one(r);
    for (unsigned k = 0; 2 * k + 1 < n; ++k) {
        // Deterministic pivot: first (i, j), i != j, row-major over the
        // remaining working vectors whose pairing f(v_i, Pi v_j) is a unit.
        // For non-degenerate forms one exists (residue-field argument); the
        // diagonal never works since f(v, Pi v) = t q(v) with t a non-unit.
        std::size_t m = work.size();
        std::size_t pi_i = m, pi_j = m;
        for (std::size_t i = 0; i < m && pi_i == m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                if (s_is_unit(r, pairing_pi(form, work[i], work[j]))) {
                    pi_i = i;
                    pi_j = j;
                    break;
                }
            }
        if (pi_i == m)
            raise(errc::degenerate, "no unit pivot among the remaining basis vectors");
        HVector x = std::move(work[pi_i]);
        HVector y = std::move(work[pi_j]);
        work.erase(work.begin() + std::ptrdiff_t(std::max(pi_i, pi_j)));
        work.erase(work.begin() + std::ptrdiff_t(std::min(pi_i, pi_j)));
        // Prescale y so the pairing is exactly 1, then normalize.
        Scalar mu0 = pairing_pi(form, x, y);
        y = scale_vec(r, q_from_scalar(r, s_invert_unit(r, mu0)), y);
        PairResult pr = pair_engine(form, std::move(x), std::move(y), one);
        for (auto& v : work) v = project_out(form, v, pr.x, pr.y, one);
        out[2 * k] = std::move(pr.x);
        out[2 * k + 1] = std::move(pr.y);
    }

    Scalar gamma2 = one;
    if (n % 2 == 1) {
        HVector v = std::move(work.front());
        Scalar lam = eval_q(form, v);
        if (!s_is_unit(r, lam))
            raise(errc::degenerate, "terminal generator takes a non-unit value");
        out[n - 1] = std::move(v);
        gamma2 = lam;
        // Pair blocks must carry the same similitude factor: scaling the first
        // member by gamma2 moves each pairing from 1 to gamma2 while keeping
        // both isotropy values and the cross pairing at zero.
        QElt g2 = q_from_scalar(r, gamma2);
        for (unsigned k = 0; 2 * k + 1 < n; ++k) out[2 * k] = scale_vec(r, g2, out[2 * k]);
    }

    QMatrix gamma1;
    gamma1.n = n;
    gamma1.e.assign(std::size_t(n) * n, q_zero(r));
    for (unsigned col = 0; col < n; ++col)
        for (unsigned row = 0; row < n; ++row) gamma1.at(row, col) = out[col][row];
    return {std::move(gamma1), std::move(gamma2)};
}

Similitude lift_similitude(const HermForm& form_high, const Similitude& sim_low,
                           unsigned from_prec) {
    const RingSpec& rh = form_high.ring();
    unsigned n = form_high.rank();
    if (from_prec < 1 || from_prec > rh.precision())
        raise(errc::precision_mismatch, "source precision outside [1, N]");
    if (sim_low.gamma1.n != n) raise(errc::rank_mismatch, "similitude size differs from the form");

    ring_ptr low = change_precision(rh, from_prec);
    HermForm form_low = truncate_form(low, form_high);
    Similitude low_copy;
    low_copy.gamma1.n = n;
    low_copy.gamma1.e = sim_low.gamma1.e;
    low_copy.gamma2 = sim_low.gamma2;
    if (!is_similitude(standard_form(low, n), form_low, low_copy))
        raise(errc::not_a_similitude_mod_i,
              "input is not a similitude for the truncated form at precision " +
                  std::to_string(from_prec));
    if (from_prec == rh.precision()) return low_copy;

    // Canonical lift of the columns; every correction below lands in the
    // thickening ideal I = (pi^from_prec), so truncation is preserved.
    std::vector<HVector> cols(n, HVector(n));
    for (unsigned col = 0; col < n; ++col)
        for (unsigned row = 0; row < n; ++row) {
            const QElt& e = sim_low.gamma1.at(row, col);
            cols[col][row] = q_from_parts(s_lift(rh, *low, e.a), s_lift(rh, *low, e.b));
        }

    unsigned npairs = n / 2;
    std::vector<Scalar> mus(npairs);
    for (unsigned k = 0; k < npairs; ++k) {
        HVector x = std::move(cols[2 * k]);
        HVector y = std::move(cols[2 * k + 1]);
        // The current pairing is gamma2_low + I-noise: a unit; the engine
        // normalizes the block onto mu_k exactly.
        Scalar mu_k = pairing_pi(form_high, x, y);
        PairResult pr = pair_engine(form_high, std::move(x), std::move(y), mu_k);
        Scalar mu_inv = s_invert_unit(rh, mu_k);
        for (unsigned later = 2 * k + 2; later < n; ++later)
            cols[later] = project_out(form_high, cols[later], pr.x, pr.y, mu_inv);
        cols[2 * k] = std::move(pr.x);
        cols[2 * k + 1] = std::move(pr.y);
        mus[k] = std::move(mu_k);
    }

    Scalar gamma2;
    if (n % 2 == 1) {
        Scalar lam = eval_q(form_high, cols[n - 1]);
        if (!s_is_unit(rh, lam))
            raise(errc::degenerate, "terminal generator takes a non-unit value");
        gamma2 = lam;
    } else {
        gamma2 = npairs ? mus[0] : s_one(rh);
    }
    // Unify the block factors: move each pair's pairing from mu_k to gamma2 by
    // scaling the first member with gamma2/mu_k (= 1 + I-noise).
    for (unsigned k = 0; k < npairs; ++k) {
        Scalar fac = s_mul(rh, gamma2, s_invert_unit(rh, mus[k]));
        cols[2 * k] = scale_vec(rh, q_from_scalar(rh, fac), cols[2 * k]);
    }

    QMatrix gamma1;
    gamma1.n = n;
    gamma1.e.assign(std::size_t(n) * n, q_zero(rh));
    for (unsigned col = 0; col < n; ++col)
        for (unsigned row = 0; row < n; ++row) gamma1.at(row, col) = cols[col][row];
    return {std::move(gamma1), std::move(gamma2)};
}

std::optional<Similitude> are_similar(const HermForm& f1, const HermForm& f2) {
    if (!(f1.ring() == f2.ring())) raise(errc::ring_mismatch, "forms live over different rings");
    if (f1.rank() != f2.rank()) raise(errc::rank_mismatch, "forms have different ranks");
    if (!is_nondegenerate(f1) || !is_nondegenerate(f2)) return std::nullopt;
    const RingSpec& r = f1.ring();
    Similitude s1 = reduce_to_standard(f1); // std -> f1
    Similitude s2 = reduce_to_standard(f2); // std -> f2
    Similitude out;
    out.gamma1 = qmat_mul(r, s2.gamma1, qmat_inverse(r, s1.gamma1));
    out.gamma2 = s_mul(r, s2.gamma2, s_invert_unit(r, s1.gamma2));
    return out;
}

} // namespace hqf
