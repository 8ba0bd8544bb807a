#include "hqf/rng.hpp"

namespace hqf {

Scalar random_scalar(const RingSpec& r, Rng& g) {
    if (r.kind() == ring_kind::zmod) {
        std::size_t bits = mpz_sizeinbase(r.modulus().get_mpz_t(), 2);
        mpz_class acc = 0;
        for (std::size_t have = 0; have < bits + 64; have += 64) {
            acc <<= 64;
            acc |= mpz_class(static_cast<unsigned long>(g.next()));
        }
        return s_from_mpz(r, acc);
    }
    std::vector<std::uint32_t> c(r.precision());
    for (auto& v : c) v = std::uint32_t(g.below(r.coeff_field().q()));
    return s_from_coeffs(r, std::move(c));
}

Scalar random_unit_scalar(const RingSpec& r, Rng& g) {
    for (;;) {
        Scalar s = random_scalar(r, g);
        if (s_is_unit(r, s)) return s;
    }
}

QElt random_qelt(const RingSpec& r, Rng& g) {
    Scalar a = random_scalar(r, g);
    Scalar b = random_scalar(r, g);
    return q_from_parts(std::move(a), std::move(b));
}

QElt random_unit_qelt(const RingSpec& r, Rng& g) {
    for (;;) {
        QElt x = random_qelt(r, g);
        if (q_is_unit(r, x)) return x;
    }
}

QMatrix random_unimodular(const RingSpec& r, unsigned n, Rng& g, unsigned steps) {
    QMatrix m = qmat_identity(r, n);
    if (n == 1) {
        m.at(0, 0) = random_unit_qelt(r, g);
        return m;
    }
    for (unsigned s = 0; s < steps; ++s) {
        unsigned kind = unsigned(g.below(3));
        unsigned i = unsigned(g.below(n));
        if (kind == 0) {
            QElt u = random_unit_qelt(r, g);
            for (unsigned j = 0; j < n; ++j) m.at(i, j) = qext_mul(r, u, m.at(i, j));
        } else if (kind == 1) {
            unsigned k = unsigned(g.below(n - 1));
            if (k >= i) ++k;
            QElt c = random_qelt(r, g);
            for (unsigned j = 0; j < n; ++j)
                m.at(i, j) = q_add(r, m.at(i, j), qext_mul(r, c, m.at(k, j)));
        } else {
            unsigned k = unsigned(g.below(n - 1));
            if (k >= i) ++k;
            for (unsigned j = 0; j < n; ++j) std::swap(m.at(i, j), m.at(k, j));
        }
    }
    return m;
}

} // namespace hqf
