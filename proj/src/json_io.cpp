#include "hqf/json_io.hpp"

#include <algorithm>
#include <cstdlib>

#include "hqf/errors.hpp"

namespace hqf {

json parse_document(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) raise(errc::parse_error, "invalid JSON");
    return j;
}

void require_v1(const json& j) {
    if (!j.is_object() || !j.contains("v") || !(j["v"] == 1))
        raise(errc::parse_error, "document must carry \"v\": 1");
}

void require_fields(const json& j, const char* what,
                    std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional) {
    if (!j.is_object()) raise(errc::parse_error, std::string(what) + " must be an object");
    for (const char* f : required)
        if (!j.contains(f))
            raise(errc::parse_error, std::string(what) + " is missing field \"" + f + "\"");
    for (const auto& [key, _] : j.items()) {
        auto in = [&](std::initializer_list<const char*> list) {
            return std::any_of(list.begin(), list.end(),
                               [&](const char* f) { return key == f; });
        };
        if (!in(required) && !in(optional))
            raise(errc::parse_error, std::string(what) + " has unknown field \"" + key + "\"");
    }
}

namespace {

mpz_class mpz_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return mpz_class(long(j.get<long long>()));
    if (j.is_string()) {
        mpz_class v;
        if (v.set_str(j.get<std::string>(), 10) != 0)
            raise(errc::parse_error, std::string(what) + " is not a decimal integer");
        return v;
    }
    raise(errc::parse_error, std::string(what) + " must be an integer or decimal string");
}

long long ll_from_json(const json& j, const char* what) {
    if (!j.is_number_integer())
        raise(errc::parse_error, std::string(what) + " must be an integer");
    return j.get<long long>();
}

unsigned uint_from_json(const json& j, const char* what) {
    long long v = ll_from_json(j, what);
    if (v < 0 || v > 1'000'000)
        raise(errc::parse_error, std::string(what) + " out of range");
    return unsigned(v);
}

std::vector<std::uint32_t> coeffs_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) {
        long long v = ll_from_json(j, what);
        if (v < 0) raise(errc::parse_error, std::string(what) + " coefficient must be >= 0");
        return {std::uint32_t(v)};
    }
    if (!j.is_array())
        raise(errc::parse_error, std::string(what) + " must be an integer or coefficient array");
    std::vector<std::uint32_t> out;
    for (const auto& e : j) {
        long long v = ll_from_json(e, what);
        if (v < 0 || v > 0xffffffffll)
            raise(errc::parse_error, std::string(what) + " coefficient out of range");
        out.push_back(std::uint32_t(v));
    }
    return out;
}

} // namespace

ring_ptr ring_from_json(const json& j) {
    require_fields(j, "ring", {"kind", "N", "t", "pi"}, {"p", "q"});
    std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    unsigned N = uint_from_json(j["N"], "N");
    if (kind == "zmod") {
        if (!j.contains("p")) raise(errc::parse_error, "zmod ring needs \"p\"");
        if (j.contains("q")) raise(errc::parse_error, "zmod ring does not take \"q\"");
        unsigned p = uint_from_json(j["p"], "p");
        return RingSpec::make_zmod(p, N, mpz_from_json(j["t"], "t"), mpz_from_json(j["pi"], "pi"));
    }
    if (kind == "polytrunc") {
        if (!j.contains("q")) raise(errc::parse_error, "polytrunc ring needs \"q\"");
        if (j.contains("p")) raise(errc::parse_error, "polytrunc ring does not take \"p\"");
        unsigned q = uint_from_json(j["q"], "q");
        return RingSpec::make_polytrunc(q, N, coeffs_from_json(j["t"], "t"),
                                        coeffs_from_json(j["pi"], "pi"));
    }
    raise(errc::parse_error, "ring kind must be \"zmod\" or \"polytrunc\"");
}

json ring_to_json(const RingSpec& r) {
    json j;
    if (r.kind() == ring_kind::zmod) {
        j["kind"] = "zmod";
        j["p"] = r.p();
        j["N"] = r.precision();
        j["t"] = r.t().z.get_str();
        j["pi"] = r.pi().z.get_str();
    } else {
        j["kind"] = "polytrunc";
        j["q"] = r.coeff_field().q();
        j["N"] = r.precision();
        j["t"] = r.t().c;
        j["pi"] = r.pi().c;
    }
    return j;
}

Scalar scalar_from_json(const RingSpec& r, const json& j) {
    if (r.kind() == ring_kind::zmod) return s_from_mpz(r, mpz_from_json(j, "scalar"));
    return s_from_coeffs(r, coeffs_from_json(j, "scalar"));
}

json scalar_to_json(const RingSpec& r, const Scalar& s) {
    if (r.kind() == ring_kind::zmod) return json(s.z.get_str());
    return json(s.c);
}

QElt qelt_from_json(const RingSpec& r, const json& j) {
    require_fields(j, "extension element", {"a", "b"});
    return QElt{scalar_from_json(r, j["a"]), scalar_from_json(r, j["b"])};
}

json qelt_to_json(const RingSpec& r, const QElt& x) {
    return json{{"a", scalar_to_json(r, x.a)}, {"b", scalar_to_json(r, x.b)}};
}

namespace {

std::vector<Scalar> matrix_from_json(const RingSpec& r, const json& j, unsigned n,
                                     const char* what) {
    if (!j.is_array() || j.size() != n)
        raise(errc::parse_error, std::string(what) + " must be an array of " +
                                     std::to_string(n) + " rows");
    std::vector<Scalar> out;
    out.reserve(std::size_t(n) * n);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n)
            raise(errc::parse_error, std::string(what) + " rows must have length " +
                                         std::to_string(n));
        for (const auto& e : row) out.push_back(scalar_from_json(r, e));
    }
    return out;
}

json matrix_to_json(const RingSpec& r, const std::vector<Scalar>& m, unsigned n) {
    json rows = json::array();
    for (unsigned i = 0; i < n; ++i) {
        json row = json::array();
        for (unsigned jx = 0; jx < n; ++jx)
            row.push_back(scalar_to_json(r, m[std::size_t(i) * n + jx]));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

HermForm form_from_json(const json& j) {
    // "v" tolerated so the same parser serves top-level form documents and
    // nested form objects
    require_fields(j, "form", {"ring", "n", "A", "B"}, {"v"});
    ring_ptr ring = ring_from_json(j["ring"]);
    unsigned n = uint_from_json(j["n"], "n");
    if (n == 0 || n > 64) raise(errc::parse_error, "rank out of range");
    std::vector<Scalar> A = matrix_from_json(*ring, j["A"], n, "A");
    std::vector<Scalar> B = matrix_from_json(*ring, j["B"], n, "B");
    return HermForm::from_matrices(std::move(ring), std::move(A), std::move(B));
}

json form_to_json(const HermForm& f) {
    json j;
    j["ring"] = ring_to_json(f.ring());
    j["n"] = f.rank();
    j["A"] = matrix_to_json(f.ring(), f.A_flat(), f.rank());
    j["B"] = matrix_to_json(f.ring(), f.B_flat(), f.rank());
    return j;
}

Similitude similitude_from_json(const RingSpec& r, unsigned n, const json& j) {
    require_fields(j, "similitude", {"gamma1", "gamma2"});
    const json& g1 = j["gamma1"];
    if (!g1.is_array() || g1.size() != n)
        raise(errc::parse_error, "gamma1 must be an array of " + std::to_string(n) + " rows");
    Similitude s;
    s.gamma1.n = n;
    s.gamma1.e.resize(std::size_t(n) * n);
    for (unsigned i = 0; i < n; ++i) {
        const json& row = g1[i];
        if (!row.is_array() || row.size() != n)
            raise(errc::parse_error, "gamma1 rows must have length " + std::to_string(n));
        for (unsigned jx = 0; jx < n; ++jx)
            s.gamma1.at(i, jx) = qelt_from_json(r, row[jx]);
    }
    s.gamma2 = scalar_from_json(r, j["gamma2"]);
    return s;
}

json similitude_to_json(const RingSpec& r, const Similitude& s) {
    json rows = json::array();
    for (unsigned i = 0; i < s.gamma1.n; ++i) {
        json row = json::array();
        for (unsigned jx = 0; jx < s.gamma1.n; ++jx)
            row.push_back(qelt_to_json(r, s.gamma1.at(i, jx)));
        rows.push_back(std::move(row));
    }
    return json{{"gamma1", std::move(rows)}, {"gamma2", scalar_to_json(r, s.gamma2)}};
}

namespace {

// Exponent strings are rationals in t-units; stored exponents are integers in
// s = t^(1/maxden) units.
std::int64_t sexp_from_string(const OCModel& M, const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    long long num = std::strtoll(p, &end, 10);
    if (end == p) raise(errc::parse_error, "exponent is not a rational");
    long long den = 1;
    if (*end == '/') {
        const char* q = end + 1;
        den = std::strtoll(q, &end, 10);
        if (end == q || den <= 0) raise(errc::parse_error, "exponent denominator invalid");
    }
    if (*end != '\0') raise(errc::parse_error, "trailing characters in exponent");
    long long scaled = num * static_cast<long long>(M.maxden());
    if (scaled % den != 0)
        raise(errc::parse_error,
              "exponent denominator does not divide maxden " + std::to_string(M.maxden()));
    return scaled / den;
}

} // namespace

MonoElt monoelt_from_json(const OCModel& M, const json& j) {
    if (!j.is_array()) raise(errc::parse_error, "coefficient must be a list of terms");
    std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2)
            raise(errc::parse_error, "term must be [element, exponent]");
        if (!term[0].is_string() || !term[1].is_string())
            raise(errc::parse_error, "term entries must be strings");
        std::string fes = term[0].get<std::string>();
        char* end = nullptr;
        unsigned long long fe = std::strtoull(fes.c_str(), &end, 10);
        if (end == fes.c_str() || *end != '\0' || fe >= M.F().q())
            raise(errc::parse_error, "field element out of range");
        terms.emplace_back(sexp_from_string(M, term[1].get<std::string>()),
                           std::uint32_t(fe));
    }
    return m_make(M, std::move(terms));
}

json monoelt_to_json(const OCModel& M, const MonoElt& e) {
    json out = json::array();
    for (const auto& [sexp, c] : e.terms) {
        Frac f = Frac::make(sexp, M.maxden());
        out.push_back(json::array({std::to_string(c), frac_to_string(f)}));
    }
    return out;
}

std::string frac_to_string(const Frac& f) {
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

TeichSeries series_from_json(const json& j, unsigned sbound) {
    require_fields(j, "series", {"q", "p", "maxden", "prec", "coeffs"}, {"v"});
    unsigned q = uint_from_json(j["q"], "q");
    unsigned p = uint_from_json(j["p"], "p");
    unsigned maxden = uint_from_json(j["maxden"], "maxden");
    unsigned prec = uint_from_json(j["prec"], "prec");
    oc_ptr model = OCModel::make(q, maxden, sbound);
    if (model->F().p() != p)
        raise(errc::parse_error, "p does not match the characteristic of F_q");
    const json& coeffs = j["coeffs"];
    if (!coeffs.is_array() || coeffs.size() != prec)
        raise(errc::parse_error, "coeffs must be an array of length prec");
    std::vector<MonoElt> c;
    c.reserve(prec);
    for (const auto& e : coeffs) c.push_back(monoelt_from_json(*model, e));
    return series_make(std::move(model), std::move(c));
}

json series_to_json(const TeichSeries& a) {
    json j;
    j["q"] = a.model->F().q();
    j["p"] = a.model->F().p();
    j["maxden"] = a.model->maxden();
    j["prec"] = a.prec();
    json coeffs = json::array();
    for (const auto& c : a.coeffs) coeffs.push_back(monoelt_to_json(*a.model, c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

json pipoly_to_json(const OCModel& M, const PiPoly& p) {
    json out = json::array();
    for (const auto& c : p) out.push_back(monoelt_to_json(M, c));
    return out;
}

LatticeAction action_from_json(const json& j) {
    require_fields(j, "action", {"rank", "generators"});
    unsigned rank = uint_from_json(j["rank"], "rank");
    const json& gens = j["generators"];
    if (!gens.is_array()) raise(errc::parse_error, "generators must be an array");
    std::vector<std::vector<mpz_class>> out;
    for (const auto& g : gens) {
        if (!g.is_array() || g.size() != rank)
            raise(errc::parse_error, "generator must have " + std::to_string(rank) + " rows");
        std::vector<mpz_class> m;
        m.reserve(std::size_t(rank) * rank);
        for (const auto& row : g) {
            if (!row.is_array() || row.size() != rank)
                raise(errc::parse_error, "generator rows must have length " +
                                             std::to_string(rank));
            for (const auto& e : row) m.push_back(mpz_from_json(e, "generator entry"));
        }
        out.push_back(std::move(m));
    }
    return make_action(rank, std::move(out));
}

json action_to_json(const LatticeAction& a) {
    json gens = json::array();
    for (const auto& g : a.generators) {
        json rows = json::array();
        for (unsigned i = 0; i < a.rank; ++i) {
            json row = json::array();
            for (unsigned jx = 0; jx < a.rank; ++jx) {
                const mpz_class& v = g[std::size_t(i) * a.rank + jx];
                row.push_back(v.fits_slong_p() ? json(v.get_si()) : json(v.get_str()));
            }
            rows.push_back(std::move(row));
        }
        gens.push_back(std::move(rows));
    }
    return json{{"rank", a.rank}, {"generators", std::move(gens)}};
}

json sp_to_json(const SpClass& c) {
    json free = json::array();
    for (const auto& v : c.free)
        free.push_back(v.fits_slong_p() ? json(v.get_si()) : json(v.get_str()));
    json tor = json::array();
    auto num = [](const mpz_class& v) {
        return v.fits_slong_p() ? json(v.get_si()) : json(v.get_str());
    };
    for (const auto& [val, mod] : c.torsion)
        tor.push_back(json{{"mod", num(mod)}, {"val", num(val)}});
    return json{{"free", std::move(free)}, {"torsion", std::move(tor)}};
}

json error_to_json(const hqf_error& e) {
    return json{{"error", {{"kind", std::string(errc_name(e.kind()))},
                           {"detail", e.detail()}}}};
}

} // namespace hqf
