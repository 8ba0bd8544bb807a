#include "doctest.h"

#include "hqf/ff.hpp"
#include "hqf/ring.hpp"
#include "hqf/rng.hpp"
#include "test_util.hpp"

using namespace hqf;

TEST_CASE("frozen extension arithmetic over Z/16 with t = pi = 2") {
    auto rp = RingSpec::make_zmod(2, 4, 2, 2);
    const RingSpec& r = *rp;

    // (1 + Pi)^2 = 1 + 2 Pi + Pi^2 = 1 + 2 Pi + (2 Pi - 2) = -1 + 4 Pi.
    QElt x = q_from_parts(s_from_int(r, 1), s_from_int(r, 1));
    QElt sq = qext_mul(r, x, x);
    CHECK(sq == q_from_parts(s_from_int(r, 15), s_from_int(r, 4)));

    // conj(a + b Pi) = (a + t b) - b Pi.
    QElt y = q_from_parts(s_from_int(r, 3), s_from_int(r, 5));
    CHECK(qext_conj(r, y) == q_from_parts(s_from_int(r, 13), s_from_int(r, 11)));

    // N(1 + Pi) = 1 + t + pi = 5, Tr(1 + Pi) = 2 + t = 4.
    auto [nrm, tr] = qext_norm_trace(r, x);
    CHECK(nrm == s_from_int(r, 5));
    CHECK(tr == s_from_int(r, 4));

    // 3^{-1} = 11 mod 16.
    CHECK(s_invert_unit(r, s_from_int(r, 3)) == s_from_int(r, 11));

    // Pi has norm pi, a non-unit.
    QElt pi_elt = q_pi_elt(r);
    CHECK(qext_norm(r, pi_elt) == s_from_int(r, 2));
    CHECK_RAISES(not_a_unit, invert_unit(r, pi_elt));
    CHECK(qext_mul(r, pi_elt, qext_conj(r, pi_elt)).a == r.pi());
}

TEST_CASE("preset parameters and theta valuations") {
    auto q2i = RingSpec::preset_q2i();
    CHECK(q2i->p() == 2);
    CHECK(q2i->precision() == 6);
    CHECK(q2i->theta_val() == 2); // theta = 8 - 4 = 4

    auto q2s = RingSpec::preset_q2sqrt2();
    CHECK(q2s->p() == 2);
    CHECK(q2s->precision() == 8);
    CHECK(q2s->theta_val() == 3); // theta = -8

    auto qp = RingSpec::preset_qp_sqrt_p(3);
    CHECK(qp->p() == 3);
    CHECK(qp->precision() == 5);
    CHECK(qp->theta_val() == 1); // theta = 4 * 3

    CHECK_RAISES(constraint_violation, RingSpec::make_zmod(2, 4, 1, 2)); // t must be a non-unit
    CHECK_RAISES(constraint_violation, RingSpec::make_zmod(2, 4, 2, 1)); // pi must be a non-unit
}

TEST_CASE("finite field towers pick the canonical modulus") {
    const ff::field f9 = ff::field::make(9);
    CHECK(f9.p() == 3);
    CHECK(f9.degree() == 2);
    CHECK(f9.modulus() == std::vector<std::uint32_t>{1, 0, 1}); // w^2 + 1

    const ff::field f4 = ff::field::make(4);
    CHECK(f4.modulus() == std::vector<std::uint32_t>{1, 1, 1}); // w^2 + w + 1

    const ff::field f8 = ff::field::make(8);
    CHECK(f8.modulus() == std::vector<std::uint32_t>{1, 0, 1, 1}); // w^3 + w^2 + 1

    // Multiplicative structure: every nonzero element has order dividing q - 1.
    for (std::uint32_t a = 1; a < 9; ++a) {
        CHECK(f9.pow(a, 8) == 1);
        CHECK(f9.mul(a, f9.inv(a)) == 1);
    }
    CHECK_RAISES(not_a_unit, f9.inv(0));
}

TEST_CASE("scalar ring laws hold on random samples") {
    for (const auto& rp : test_rings()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x11aa, r.kind() == ring_kind::zmod ? r.p() : r.precision());
        for (int i = 0; i < 1000; ++i) {
            Scalar a = random_scalar(r, g), b = random_scalar(r, g), c = random_scalar(r, g);
            CHECK(s_add(r, a, b) == s_add(r, b, a));
            CHECK(s_mul(r, a, b) == s_mul(r, b, a));
            CHECK(s_mul(r, a, s_mul(r, b, c)) == s_mul(r, s_mul(r, a, b), c));
            CHECK(s_mul(r, a, s_add(r, b, c)) == s_add(r, s_mul(r, a, b), s_mul(r, a, c)));
            CHECK(s_add(r, a, s_neg(r, a)) == s_zero(r));
            if (s_is_unit(r, a)) {
                CHECK(s_mul(r, a, s_invert_unit(r, a)) == s_one(r));
            }
        }
        // Valuation: v(p^k * unit) = k for zmod, v(z^k * unit) = k for polytrunc.
        for (unsigned k = 0; k < r.precision(); ++k) {
            Scalar u = random_unit_scalar(r, g);
            Scalar pk = s_one(r);
            Scalar p_elt = r.kind() == ring_kind::zmod ? s_from_int(r, long(r.p()))
                                                       : s_from_coeffs(r, {0, 1});
            for (unsigned j = 0; j < k; ++j) pk = s_mul(r, pk, p_elt);
            CHECK(s_val(r, s_mul(r, pk, u)) == k);
        }
        CHECK(s_val(r, s_zero(r)) == r.precision());
    }
}

TEST_CASE("extension arithmetic laws hold on random samples") {
    for (const auto& rp : test_rings()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x22bb, r.precision());
        const QElt pi_elt = q_pi_elt(r);
        // Pi^2 = t Pi - pi.
        CHECK(qext_mul(r, pi_elt, pi_elt) ==
              q_from_parts(s_neg(r, r.pi()), r.t()));
        for (int i = 0; i < 1000; ++i) {
            QElt x = random_qelt(r, g), y = random_qelt(r, g), z = random_qelt(r, g);
            CHECK(qext_mul(r, x, y) == qext_mul(r, y, x));
            CHECK(qext_mul(r, x, qext_mul(r, y, z)) == qext_mul(r, qext_mul(r, x, y), z));
            CHECK(qext_mul(r, x, q_add(r, y, z)) ==
                  q_add(r, qext_mul(r, x, y), qext_mul(r, x, z)));
            // Conjugation is a ring involution.
            CHECK(qext_conj(r, qext_conj(r, x)) == x);
            CHECK(qext_conj(r, qext_mul(r, x, y)) ==
                  qext_mul(r, qext_conj(r, x), qext_conj(r, y)));
            // Norm is multiplicative, trace additive; both land in the base ring.
            CHECK(qext_norm(r, qext_mul(r, x, y)) ==
                  s_mul(r, qext_norm(r, x), qext_norm(r, y)));
            CHECK(qext_trace(r, q_add(r, x, y)) ==
                  s_add(r, qext_trace(r, x), qext_trace(r, y)));
            // x * conj(x) = N(x) as a scalar.
            QElt xc = qext_mul(r, x, qext_conj(r, x));
            CHECK(xc == q_from_scalar(r, qext_norm(r, x)));
            if (q_is_unit(r, x)) {
                CHECK(qext_mul(r, x, invert_unit(r, x)) == q_one(r));
            }
        }
    }
}

TEST_CASE("truncate and lift round-trip") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        auto low = change_precision(r, r.precision() - 2);
        Rng g = rng_stream(0x33cc, r.p());
        for (int i = 0; i < 200; ++i) {
            Scalar a = random_scalar(*low, g);
            CHECK(s_truncate(*low, r, s_lift(r, *low, a)) == a);
        }
        CHECK_RAISES(precision_mismatch, change_precision(r, r.precision() + 1));
    }
}

TEST_CASE("random unimodular matrices invert exactly") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x44dd, r.p());
        for (unsigned n = 1; n <= 4; ++n) {
            for (int i = 0; i < 25; ++i) {
                QMatrix m = random_unimodular(r, n, g);
                QMatrix inv = qmat_inverse(r, m);
                CHECK(qmat_mul(r, m, inv) == qmat_identity(r, n));
                CHECK(qmat_mul(r, inv, m) == qmat_identity(r, n));
            }
        }
    }
}

TEST_CASE("rng streams are deterministic and indexed") {
    Rng a = rng_stream(42, 7), b = rng_stream(42, 7), c = rng_stream(42, 8);
    CHECK(a.next() == b.next());
    CHECK(a.next() == b.next());
    CHECK(rng_stream(42, 7).next() != c.next());
}

TEST_CASE("polytrunc coefficient validation") {
    CHECK_RAISES(parse_error, RingSpec::make_polytrunc(9, 4, {0, 9}, {0, 1}));
    auto rp = RingSpec::make_polytrunc(9, 4, {0, 1}, {0, 1});
    CHECK_RAISES(precision_mismatch, s_from_coeffs(*rp, {1, 2, 3, 4, 5}));
    Scalar s = s_from_coeffs(*rp, {3});
    CHECK(s.c.size() == 4);
    CHECK(s_is_unit(*rp, s));
}
