#include <cmath>

#include "doctest.h"

#include "hqf/reduce.hpp"
#include "hqf/rng.hpp"
#include "test_util.hpp"

using namespace hqf;

namespace {

HermForm scrambled(const ring_ptr& rp, unsigned n, Rng& g, Similitude* applied = nullptr) {
    const RingSpec& r = *rp;
    QMatrix S = random_unimodular(r, n, g);
    Scalar u = random_unit_scalar(r, g);
    // q_f(m) = u * q_std(S m), so gamma1 = S^{-1}, gamma2 = u maps the
    // standard form onto f.
    if (applied) *applied = Similitude{qmat_inverse(r, S), u};
    return scale_form(pullback(standard_form(rp, n), S), u);
}

unsigned newton_budget(const RingSpec& r) {
    unsigned b = 0;
    while ((1u << b) < r.precision()) ++b;
    return b + 2;
}

} // namespace

TEST_CASE("pair engine normalizes a unit pairing to the standard block") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x1234, r.p());
        for (int rep = 0; rep < 60; ++rep) {
            HermForm f = scrambled(rp, 2, g);
            HVector x{random_qelt(r, g), random_qelt(r, g)};
            HVector y{random_qelt(r, g), random_qelt(r, g)};
            Scalar mu = pairing_pi(f, x, y);
            if (!s_is_unit(r, mu)) continue;
            PairResult p = pair_engine(f, x, y, mu);
            // Postcondition: Gram of (x', y', Pi x', Pi y') is mu times the
            // standard block.
            auto gm = pair_gram(f, p.x, p.y);
            const long expected[16] = {0, 0, 0, 1,  //
                                       0, 0, -1, 0, //
                                       0, -1, 0, 0, //
                                       1, 0, 0, 0};
            for (int i = 0; i < 16; ++i)
                CHECK(gm[i] == s_mul(r, mu, s_from_int(r, expected[i])));
            CHECK(s_is_zero(r, eval_q(f, p.x)));
            CHECK(s_is_zero(r, eval_q(f, p.y)));
            CHECK(pairing_pi(f, p.x, p.y) == mu);
        }
    }
}

TEST_CASE("pair engine meets its iteration budget and tracks the transition") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x2345, r.p());
        int done = 0;
        while (done < 50) {
            HermForm f = scrambled(rp, 2, g);
            HVector x{random_qelt(r, g), random_qelt(r, g)};
            HVector y{random_qelt(r, g), random_qelt(r, g)};
            Scalar mu = pairing_pi(f, x, y);
            if (!s_is_unit(r, mu)) continue;
            PairResult res = pair_engine(f, x, y, mu);
            CHECK(res.newton_iters <= newton_budget(r));
            // The recorded 2x2 transition reproduces (x', y') from (x, y).
            const QMatrix& T = res.transition;
            for (unsigned c = 0; c < 2; ++c) {
                QElt wx = q_add(r, qext_mul(r, T.at(0, 0), x[c]), qext_mul(r, T.at(0, 1), y[c]));
                QElt wy = q_add(r, qext_mul(r, T.at(1, 0), x[c]), qext_mul(r, T.at(1, 1), y[c]));
                CHECK(wx == res.x[c]);
                CHECK(wy == res.y[c]);
            }
            // Invertible: the pair spans the same module as the input pair.
            (void)qmat_inverse(r, T);
            ++done;
        }
    }
}

TEST_CASE("pair engine rejects non-unit pairings") {
    auto rp = RingSpec::preset_q2i();
    const RingSpec& r = *rp;
    HermForm f = standard_form(rp, 2);
    HVector x{q_one(r), q_zero(r)};
    HVector y{q_zero(r), q_from_scalar(r, s_from_int(r, 2))};
    CHECK_RAISES(bad_pairing, make_isotropic_pair(f, x, y));
}

TEST_CASE("reduce_to_standard round-trips scrambles of every rank") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x3456, r.p());
        for (unsigned n = 1; n <= 5; ++n) {
            for (int rep = 0; rep < 12; ++rep) {
                HermForm f = scrambled(rp, n, g);
                Similitude sim = reduce_to_standard(f);
                CHECK(s_is_unit(r, sim.gamma2));
                CHECK(is_similitude(standard_form(rp, n), f, sim));
            }
        }
    }
}

TEST_CASE("reduce_to_standard rejects degenerate forms") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        auto zero2 = HermForm::from_matrices(
            rp, std::vector<Scalar>(4, s_zero(r)), std::vector<Scalar>(4, s_zero(r)));
        CHECK_RAISES(degenerate, reduce_to_standard(zero2));
        // Scaling by pi kills exactness of the unit pairing as well.
        HermForm f = scale_form(standard_form(rp, 2), r.pi());
        CHECK_RAISES(degenerate, reduce_to_standard(f));
    }
}

TEST_CASE("are_similar produces verified witnesses and honest refusals") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x4567, r.p());
        for (unsigned n = 1; n <= 3; ++n) {
            HermForm f1 = scrambled(rp, n, g);
            HermForm f2 = scrambled(rp, n, g);
            auto sim = are_similar(f1, f2);
            REQUIRE(sim.has_value());
            CHECK(is_similitude(f1, f2, *sim));
        }
        // Degenerate inputs are not similar to anything, including themselves.
        auto zero1 = HermForm::from_matrices(rp, {s_zero(r)}, {s_zero(r)});
        CHECK_FALSE(are_similar(zero1, zero1).has_value());
        CHECK_FALSE(are_similar(standard_form(rp, 1), zero1).has_value());
        CHECK_RAISES(rank_mismatch,
                     are_similar(standard_form(rp, 1), standard_form(rp, 3)));
    }
    CHECK_RAISES(ring_mismatch,
                 are_similar(standard_form(RingSpec::preset_q2i(), 1),
                             standard_form(RingSpec::preset_q2sqrt2(), 1)));
}

TEST_CASE("is_similitude checks the full identity, not a sample") {
    auto rp = RingSpec::preset_q2i();
    const RingSpec& r = *rp;
    Rng g = rng_stream(0x5678, r.p());
    Similitude applied;
    HermForm f = scrambled(rp, 2, g, &applied);
    CHECK(is_similitude(standard_form(rp, 2), f, applied));
    // Perturbing one entry of gamma1 breaks it.
    Similitude broken = applied;
    broken.gamma1.at(0, 0) = q_add(r, broken.gamma1.at(0, 0), q_one(r));
    CHECK_FALSE(is_similitude(standard_form(rp, 2), f, broken));
    // A non-unit gamma2 is never a similitude scale here.
    Similitude scaled = applied;
    scaled.gamma2 = s_mul(r, scaled.gamma2, r.pi());
    CHECK_FALSE(is_similitude(standard_form(rp, 2), f, scaled));
}

TEST_CASE("similitudes lift through precision with exact truncation agreement") {
    for (const auto& rp : test_presets()) {
        const RingSpec& r = *rp;
        Rng g = rng_stream(0x6789, r.p());
        for (unsigned from = 2; from <= 3; ++from) {
            auto low = change_precision(r, from);
            for (unsigned n = 1; n <= 3; ++n) {
                HermForm f = scrambled(rp, n, g);
                HermForm fl = truncate_form(low, f);
                Similitude sim_low = reduce_to_standard(fl);
                Similitude lifted = lift_similitude(f, sim_low, from);
                CHECK(is_similitude(standard_form(rp, n), f, lifted));
                bool agree = s_truncate(*low, r, lifted.gamma2) == sim_low.gamma2;
                for (unsigned i = 0; i < n * n; ++i) {
                    agree = agree &&
                            s_truncate(*low, r, lifted.gamma1.e[i].a) == sim_low.gamma1.e[i].a &&
                            s_truncate(*low, r, lifted.gamma1.e[i].b) == sim_low.gamma1.e[i].b;
                }
                CHECK(agree);
            }
        }
    }
}

TEST_CASE("lift_similitude rejects matrices that are not similitudes mod I") {
    auto rp = RingSpec::preset_q2i();
    const RingSpec& r = *rp;
    Rng g = rng_stream(0x789a, r.p());
    HermForm f = scrambled(rp, 2, g);
    auto low = change_precision(r, 3);
    Similitude sim_low = reduce_to_standard(truncate_form(low, f));
    sim_low.gamma1.at(0, 1) = q_add(*low, sim_low.gamma1.at(0, 1), q_one(*low));
    CHECK_RAISES(not_a_similitude_mod_i, lift_similitude(f, sim_low, 3));
}
