#include "doctest.h"

#include "hqf/json_io.hpp"
#include "hqf/rng.hpp"
#include "test_util.hpp"

using namespace hqf;

TEST_CASE("documents must carry the schema version") {
    CHECK_RAISES(parse_error, require_v1(parse_document(R"({"n": 1})")));
    CHECK_RAISES(parse_error, require_v1(parse_document(R"({"v": 2, "n": 1})")));
    require_v1(parse_document(R"({"v": 1})"));
    CHECK_RAISES(parse_error, parse_document("not json at all"));
}

TEST_CASE("unknown fields are rejected everywhere") {
    json r = ring_to_json(*RingSpec::preset_q2i());
    json bad = r;
    bad["spin"] = 3;
    CHECK_RAISES(parse_error, ring_from_json(bad));

    HermForm f = standard_form(RingSpec::preset_q2i(), 1);
    json fj = form_to_json(f);
    json fbad = fj;
    fbad["extra"] = true;
    CHECK_RAISES(parse_error, form_from_json(fbad));
}

TEST_CASE("rings round-trip through JSON") {
    for (const auto& rp : test_rings()) {
        json j = ring_to_json(*rp);
        CHECK(*ring_from_json(j) == *rp);
    }
}

TEST_CASE("scalars accept integers or strings and round-trip") {
    auto rp = RingSpec::preset_q2i();
    const RingSpec& r = *rp;
    CHECK(scalar_from_json(r, json(37)) == s_from_int(r, 37));
    CHECK(scalar_from_json(r, json("37")) == s_from_int(r, 37));
    CHECK(scalar_from_json(r, json("-1")) == s_from_int(r, -1));
    CHECK(scalar_to_json(r, s_from_int(r, 37)) == json("37"));
    CHECK_RAISES(parse_error, scalar_from_json(r, json("5x")));
    CHECK_RAISES(parse_error, scalar_from_json(r, json(1.5)));

    auto pp = RingSpec::make_polytrunc(9, 4, {0, 1}, {0, 1});
    Scalar s = s_from_coeffs(*pp, {3, 0, 2});
    json sj = scalar_to_json(*pp, s);
    CHECK(sj.is_array());
    CHECK(sj.size() == 4); // always full precision on output
    CHECK(scalar_from_json(*pp, sj) == s);
    CHECK(scalar_from_json(*pp, json::parse("[3,0,2]")) == s);
    CHECK(scalar_from_json(*pp, json(7)) == s_from_coeffs(*pp, {7}));
    CHECK_RAISES(parse_error, scalar_from_json(*pp, json::parse("[9]")));
}

TEST_CASE("forms and similitudes round-trip") {
    for (const auto& rp : test_presets()) {
        Rng g = rng_stream(0x7507, rp->p());
        for (unsigned n = 1; n <= 3; ++n) {
            HermForm f = random_valid_form(rp, n, g);
            CHECK(form_from_json(form_to_json(f)) == f);

            Similitude sim{random_unimodular(*rp, n, g), random_unit_scalar(*rp, g)};
            json sj = similitude_to_json(*rp, sim);
            Similitude back = similitude_from_json(*rp, n, sj);
            CHECK(back.gamma1 == sim.gamma1);
            CHECK(back.gamma2 == sim.gamma2);
        }
    }
    // A form document may carry the version field directly.
    json doc = form_to_json(standard_form(RingSpec::preset_q2i(), 2));
    doc["v"] = 1;
    CHECK(form_from_json(doc) == standard_form(RingSpec::preset_q2i(), 2));
}

TEST_CASE("invalid forms are rejected on parse") {
    json doc = form_to_json(standard_form(RingSpec::preset_q2i(), 1));
    doc["B"][0][0] = "5"; // breaks B_11 = t A_11
    CHECK_RAISES(constraint_violation, form_from_json(doc));
    json doc2 = form_to_json(standard_form(RingSpec::preset_q2i(), 2));
    doc2["n"] = 3;
    CHECK_RAISES(parse_error, form_from_json(doc2));
}

TEST_CASE("series and monomial elements round-trip") {
    auto model = OCModel::make(9, 9);
    const OCModel& M = *model;
    MonoElt e = m_make(M, {{3, 2}, {27, 1}});
    json ej = monoelt_to_json(M, e);
    CHECK(monoelt_from_json(M, ej) == e);
    // The documented wire shape: [[field element, exponent "num/den"]].
    CHECK(ej == json::parse(R"([["2","1/3"],["1","3/1"]])"));

    std::vector<MonoElt> coeffs{e, m_one(), m_zero(), m_monomial(M, 2, 10)};
    TeichSeries a = series_make(model, coeffs);
    json aj = series_to_json(a);
    CHECK(aj["q"] == 9);
    CHECK(aj["p"] == 3);
    CHECK(series_from_json(aj) == a);

    json bad = aj;
    bad["p"] = 2;
    CHECK_RAISES(parse_error, series_from_json(bad));
    json frac = aj;
    frac["coeffs"][0] = json::parse(R"([["1","1/2"]])"); // 1/2 not in (1/9) Z
    CHECK_RAISES(parse_error, series_from_json(frac));
}

TEST_CASE("actions and specialization classes serialize") {
    json aj = json::parse(R"({"rank": 2, "generators": [[[0, 1], [1, 0]]]})");
    LatticeAction act = action_from_json(aj);
    CHECK(act.rank == 2);
    CHECK(action_from_json(action_to_json(act)).generators == act.generators);

    SpClass c = sp(act, {mpz_class(3), mpz_class(4)});
    json cj = sp_to_json(c);
    CHECK(cj.contains("free"));
    CHECK(cj.contains("torsion"));

    CHECK_RAISES(parse_error,
                 action_from_json(json::parse(R"({"rank": 2, "generators": [[[0, 1]]]})")));
}

TEST_CASE("errors serialize with PascalCase kinds") {
    try {
        raise(errc::degenerate, "flat directions");
    } catch (const hqf_error& e) {
        json j = error_to_json(e);
        CHECK(j["error"]["kind"] == "Degenerate");
        CHECK(j["error"]["detail"] == "flat directions");
    }
    try {
        raise(errc::not_primitive, "x");
    } catch (const hqf_error& e) {
        CHECK(error_to_json(e)["error"]["kind"] == "NotPrimitive");
    }
}
