#include "doctest.h"

#include "hqf/series.hpp"
#include "test_util.hpp"

using namespace hqf;

namespace {

// [t^k] as a monomial: coefficient 1, s-exponent k * maxden.
MonoElt tpow(const OCModel& M, std::int64_t k) {
    return m_monomial(M, 1, k * std::int64_t(M.maxden()));
}

TeichSeries pad_series(oc_ptr model, std::vector<MonoElt> coeffs, unsigned prec) {
    coeffs.resize(prec, m_zero());
    return series_make(std::move(model), std::move(coeffs));
}

PiPoly poly_mul(const OCModel& M, const PiPoly& a, const PiPoly& b) {
    PiPoly out(a.size() + b.size() - 1, m_zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = m_add(M, out[i + j], m_mul(M, a[i], b[j]));
    return out;
}

} // namespace

TEST_CASE("monomial-sum arithmetic is exact") {
    auto model = OCModel::make(9, 1);
    const OCModel& M = *model;
    // (1 + t)(1 - t) = 1 - t^2; -1 = 2 in characteristic 3.
    MonoElt a = m_make(M, {{0, 1}, {1, 1}});
    MonoElt b = m_make(M, {{0, 1}, {1, 2}});
    CHECK(m_mul(M, a, b) == m_make(M, {{0, 1}, {2, 2}}));
    CHECK(m_sub(M, a, a) == m_zero());
    CHECK(m_add(M, a, m_neg(M, a)) == m_zero());
    // Valuations.
    CHECK(m_val_s(a) == std::optional<std::int64_t>(0));
    CHECK(m_val_s(m_make(M, {{3, 2}, {5, 1}})) == std::optional<std::int64_t>(3));
    CHECK_FALSE(m_val_s(m_zero()).has_value());
    CHECK(m_is_unit(a));
    CHECK_FALSE(m_is_unit(tpow(M, 1)));
    CHECK(m_in_mc(tpow(M, 1)));
    CHECK(m_in_mc(m_zero()));
    CHECK_FALSE(m_in_mc(a));
    // Truncated inversion: a * a^{-1} = 1 below the bound.
    MonoElt inv = m_inv_trunc(M, a, 8);
    CHECK(m_trunc(m_mul(M, a, inv), 8) == m_one());
}

TEST_CASE("coset invariant is the valuation class") {
    auto model = OCModel::make(4, 2);
    const OCModel& M = *model;
    CHECK(coset_invariant(M, m_make(M, {{0, 1}, {2, 1}})) == Frac::make(0, 1));
    CHECK(coset_invariant(M, m_monomial(M, 1, 3)) == Frac::make(3, 2)); // t^{3/2}
    MonoElt c = m_mul(M, tpow(M, 2), m_make(M, {{0, 1}, {2, 1}}));     // t^2 (1 + t)
    CHECK(coset_invariant(M, c) == Frac::make(2, 1));
    CHECK_RAISES(zero_input, coset_invariant(M, m_zero()));
    // Homomorphism under multiplication.
    MonoElt d = m_monomial(M, 1, 5);
    Frac sum = Frac::make(2 * 2 + 5, 2);
    CHECK(coset_invariant(M, m_mul(M, c, d)) == sum);
}

TEST_CASE("primitivity, distinguished, and crystalline detectors") {
    auto model = OCModel::make(9, 1);
    const unsigned prec = 4;

    TeichSeries pi_minus_t =
        pad_series(model, {m_neg(*model, tpow(*model, 1)), m_one()}, prec);
    CHECK(is_primitive(pi_minus_t) == std::optional<unsigned>(1));
    CHECK(is_distinguished_deg1(pi_minus_t));
    CHECK_FALSE(in_crystalline_ideal(pi_minus_t));

    // a_0 = 0 is not primitive: the pi-power is handled separately by the
    // Weierstrass preparation, which still factors it as (1, pi).
    TeichSeries just_pi = pad_series(model, {m_zero(), m_one()}, prec);
    CHECK_FALSE(is_primitive(just_pi).has_value());
    CHECK(is_distinguished_deg1(just_pi));
    CHECK_FALSE(in_crystalline_ideal(just_pi));

    TeichSeries unit_series = pad_series(model, {m_one(), m_one()}, prec);
    CHECK(is_primitive(unit_series) == std::optional<unsigned>(0));
    CHECK_FALSE(is_distinguished_deg1(unit_series));

    // [t] + [t] pi: every coefficient in m_C.
    TeichSeries crys = pad_series(model, {tpow(*model, 1), tpow(*model, 1)}, prec);
    CHECK_FALSE(is_primitive(crys).has_value());
    CHECK_FALSE(is_distinguished_deg1(crys));
    CHECK(in_crystalline_ideal(crys));

    TeichSeries zero = pad_series(model, {}, prec);
    CHECK_FALSE(is_primitive(zero).has_value());
    CHECK(in_crystalline_ideal(zero));

    // Unit multiples preserve the primitive degree.
    TeichSeries u = pad_series(model, {m_make(*model, {{0, 2}, {1, 1}}), m_one(), tpow(*model, 2)},
                               prec);
    CHECK(is_primitive(series_mul(u, pi_minus_t)) == std::optional<unsigned>(1));
    CHECK(is_primitive(series_mul(u, unit_series)) == std::optional<unsigned>(0));
}

TEST_CASE("weierstrass preparation: frozen examples") {
    auto model = OCModel::make(9, 1);
    const OCModel& M = *model;
    const unsigned prec = 4;

    // pi itself: unit 1, polynomial pi.
    WeierstrassFactorization w = weierstrass_prep(pad_series(model, {m_zero(), m_one()}, prec));
    CHECK(w.unit == pad_series(model, {m_one()}, prec));
    CHECK(w.poly == PiPoly{m_zero(), m_one()});

    // (1 + pi)(pi - [t]) = -[t] + (1 - [t]) pi + pi^2.
    MonoElt mt = m_neg(M, tpow(M, 1));
    TeichSeries prod = series_mul(pad_series(model, {m_one(), m_one()}, prec),
                                  pad_series(model, {mt, m_one()}, prec));
    w = weierstrass_prep(prod);
    CHECK(w.poly == PiPoly{mt, m_one()});
    CHECK(w.unit == pad_series(model, {m_one(), m_one()}, prec));

    // pi^2 - [t^3] is already prepared.
    TeichSeries sq = pad_series(model, {m_neg(M, tpow(M, 3)), m_zero(), m_one()}, prec);
    w = weierstrass_prep(sq);
    CHECK(w.unit == pad_series(model, {m_one()}, prec));
    CHECK(w.poly == PiPoly{m_neg(M, tpow(M, 3)), m_zero(), m_one()});

    CHECK_RAISES(not_primitive,
                 weierstrass_prep(pad_series(model, {tpow(M, 1), tpow(M, 1)}, prec)));
}

TEST_CASE("weierstrass preparation: reconstruction and determinism on random inputs") {
    auto model = OCModel::make(9, 9);
    const OCModel& M = *model;
    const unsigned prec = 6;
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&] {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    auto rand_mono = [&](bool unit, bool positive) {
        std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
        const unsigned k = 1 + unsigned(next() % 2);
        for (unsigned i = 0; i < k; ++i)
            terms.push_back({std::int64_t(next() % 12) + (positive ? 1 : 0),
                             std::uint32_t(next() % 9)});
        MonoElt e = m_make(M, std::move(terms));
        if (unit && !m_is_unit(e)) e = m_add(M, e, m_one());
        if (unit && !m_is_unit(e)) e = m_add(M, e, m_one());
        if (positive && !m_in_mc(e)) return tpow(M, 1);
        return e;
    };
    for (int rep = 0; rep < 25; ++rep) {
        const unsigned d = 1 + unsigned(next() % 2);
        // The square normalization pins deg(unit) <= prec - 1 - d, so units
        // drawn inside that window give products with exact finite-support
        // factorizations; fuller units overflow the support guard honestly.
        std::vector<MonoElt> ucoef(prec, m_zero());
        for (unsigned i = 0; i + d < prec; ++i) ucoef[i] = rand_mono(false, false);
        ucoef[0] = rand_mono(true, false);
        TeichSeries u = series_make(model, ucoef);
        std::vector<MonoElt> pcoef(d + 1, m_zero());
        pcoef[d] = m_one();
        for (unsigned i = 0; i < d; ++i) pcoef[i] = rand_mono(false, true);
        if (m_is_zero(pcoef[0])) pcoef[0] = tpow(M, 1);
        TeichSeries a = series_mul(u, pad_series(model, pcoef, prec));

        WeierstrassFactorization w = weierstrass_prep(a);
        CHECK(is_primitive(a) == std::optional<unsigned>(d));
        REQUIRE(w.poly.size() == d + 1);
        CHECK(w.poly[d] == m_one());
        for (unsigned i = 0; i < d; ++i) CHECK(m_in_mc(w.poly[i]));
        CHECK(m_is_unit(w.unit.coeffs[0]));
        std::vector<MonoElt> pc = w.poly;
        CHECK(series_mul(w.unit, pad_series(model, pc, prec)) == a);
        // The constant coefficient of the polynomial part is nonzero, which
        // makes the normalized factorization unique: prep must recover the
        // pair the product was built from.
        CHECK(w.poly == pcoef);
        CHECK(w.unit == u);
        CHECK(weierstrass_prep(a).poly == w.poly);
    }
}

TEST_CASE("newton polygons of prepared polynomials") {
    auto model = OCModel::make(9, 1);
    const OCModel& M = *model;

    NewtonPolygon np = newton_polygon(M, {m_neg(M, tpow(M, 1)), m_one()});
    CHECK(np.pi_power == 0);
    REQUIRE(np.segments.size() == 1);
    CHECK(np.segments[0] == std::make_pair(Frac::make(1, 1), 1u));

    // pi^2 - ([t] + [t^2]) pi + [t^3]: hull of (0,3), (1,1), (2,0).
    MonoElt mid = m_neg(M, m_add(M, tpow(M, 1), tpow(M, 2)));
    np = newton_polygon(M, {tpow(M, 3), mid, m_one()});
    CHECK(np.pi_power == 0);
    REQUIRE(np.segments.size() == 2);
    CHECK(np.segments[0] == std::make_pair(Frac::make(1, 1), 1u));
    CHECK(np.segments[1] == std::make_pair(Frac::make(2, 1), 1u));

    // pi^2 - [t^2] pi: the pi factor is reported as an explicit prefix power.
    np = newton_polygon(M, {m_zero(), m_neg(M, tpow(M, 2)), m_one()});
    CHECK(np.pi_power == 1);
    REQUIRE(np.segments.size() == 1);
    CHECK(np.segments[0] == std::make_pair(Frac::make(2, 1), 1u));
}

TEST_CASE("linear factor extraction: split, partial, and pi-power cases") {
    auto model9 = OCModel::make(9, 1);
    const OCModel& M = *model9;

    // (pi - [t])(pi - [t^2]) factors completely.
    MonoElt mid = m_neg(M, m_add(M, tpow(M, 1), tpow(M, 2)));
    PiPoly P{tpow(M, 3), mid, m_one()};
    FactorResult f = factor_linear(M, P);
    CHECK(f.complete);
    REQUIRE(f.roots.size() == 2);
    CHECK(f.roots[0].first == tpow(M, 1));
    CHECK(f.roots[0].second == 1);
    CHECK(f.roots[1].first == tpow(M, 2));
    CHECK(f.roots[1].second == 1);
    CHECK(f.remainder == PiPoly{m_one()});
    for (const auto& [root, mult] : f.roots) CHECK(m_is_zero(poly_eval(M, P, root)));
    // Product of the extracted factors reconstructs P.
    PiPoly rebuilt{m_one()};
    for (const auto& [root, mult] : f.roots)
        for (unsigned k = 0; k < mult; ++k)
            rebuilt = poly_mul(M, rebuilt, PiPoly{m_neg(M, root), m_one()});
    CHECK(rebuilt == P);

    // pi (pi - [t]): a zero root of multiplicity one plus a simple root.
    FactorResult fp = factor_linear(M, PiPoly{m_zero(), m_neg(M, tpow(M, 1)), m_one()});
    CHECK(fp.complete);
    REQUIRE(fp.roots.size() == 2);
    CHECK(fp.roots[0].first == m_zero());
    CHECK(fp.roots[0].second == 1);
    CHECK(fp.roots[1].first == tpow(M, 1));

    // pi^2 - [t] in characteristic 2: the root t^{1/2} exists in the model,
    // but the derivative vanishes, so extraction honestly declines.
    auto model2 = OCModel::make(2, 2);
    PiPoly insep{m_monomial(*model2, 1, 2), m_zero(), m_one()};
    FactorResult g = factor_linear(*model2, insep);
    CHECK_FALSE(g.complete);
    CHECK(g.roots.empty());
    CHECK(g.remainder == insep);

    // Determinism.
    FactorResult f2 = factor_linear(M, P);
    CHECK(f2.roots == f.roots);
    CHECK(f2.complete == f.complete);
}
