#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hqf/disc.hpp"
#include "hqf/json_io.hpp"
#include "hqf/reduce.hpp"
#include "hqf/rng.hpp"
#include "hqf/selftest.hpp"

namespace {

using hqf::json;

std::string read_all(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) hqf::raise(hqf::errc::parse_error, "cannot open input file: " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

void write_all(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) hqf::raise(hqf::errc::parse_error, "cannot open output file: " + path);
    out << text;
}

json preset_ring_json(const std::string& name) {
    if (name == "q2i") return hqf::ring_to_json(*hqf::RingSpec::preset_q2i());
    if (name == "q2sqrt2") return hqf::ring_to_json(*hqf::RingSpec::preset_q2sqrt2());
    const std::string prefix = "qp-sqrt-p:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string digits = name.substr(prefix.size());
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            hqf::raise(hqf::errc::parse_error, "bad prime in ring preset: " + name);
        return hqf::ring_to_json(*hqf::RingSpec::preset_qp_sqrt_p(std::stoul(digits)));
    }
    hqf::raise(hqf::errc::parse_error,
               "unknown ring preset (expected q2i, q2sqrt2, or qp-sqrt-p:<p>): " + name);
}

// A --ring-preset supplies the "ring" field of a form object that omits it;
// giving both is ambiguous and rejected.
void apply_preset(json& form_obj, const std::string& preset) {
    if (preset.empty()) return;
    if (!form_obj.is_object())
        hqf::raise(hqf::errc::parse_error, "form must be a JSON object");
    if (form_obj.contains("ring"))
        hqf::raise(hqf::errc::parse_error,
                   "--ring-preset conflicts with an explicit \"ring\" field");
    form_obj["ring"] = preset_ring_json(preset);
}

mpz_class mpz_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
            hqf::raise(hqf::errc::parse_error, std::string(what) + ": bad integer string");
        return mpz_class(s, 10);
    }
    hqf::raise(hqf::errc::parse_error, std::string(what) + ": expected integer or string");
}

json run_validate(json doc, const std::string& preset) {
    apply_preset(doc, preset);
    const hqf::HermForm f = hqf::form_from_json(doc);
    return json{{"v", 1}, {"valid", true}, {"n", f.rank()}};
}

json run_disc(json doc, const std::string& preset) {
    apply_preset(doc, preset);
    const hqf::HermForm f = hqf::form_from_json(doc);
    const hqf::RingSpec& r = f.ring();
    const hqf::DiscResult d = hqf::disc(f);
    json out{{"v", 1}, {"disc", hqf::scalar_to_json(r, d.value)}, {"precision", d.precision}};
    if (f.rank() % 2 == 1) {
        const hqf::DiscResult dd = hqf::disc_divided(f);
        out["disc_divided"] = hqf::scalar_to_json(r, dd.value);
        out["precision"] = dd.precision;
    } else {
        out["disc_divided"] = nullptr;
    }
    out["nondegenerate"] = hqf::is_nondegenerate(f);
    return out;
}

json run_reduce(json doc, const std::string& preset) {
    apply_preset(doc, preset);
    const hqf::HermForm f = hqf::form_from_json(doc);
    const hqf::RingSpec& r = f.ring();
    const hqf::Similitude sim = hqf::reduce_to_standard(f);
    const hqf::HermForm std_form = hqf::standard_form(f.ring_handle(), f.rank());

    bool basis_ok = true;
    for (unsigned j = 0; j < f.rank(); ++j) {
        hqf::HVector e(f.rank(), hqf::q_zero(r));
        e[j] = hqf::q_one(r);
        const hqf::Scalar lhs = hqf::eval_q(f, hqf::qmat_apply(r, sim.gamma1, e));
        const hqf::Scalar rhs = hqf::s_mul(r, sim.gamma2, hqf::eval_q(std_form, e));
        if (!(lhs == rhs)) basis_ok = false;
    }
    const unsigned random_count = 100;
    bool random_ok = true;
    hqf::Rng g = hqf::rng_stream(0x5eedull, 0);
    for (unsigned s = 0; s < random_count; ++s) {
        hqf::HVector m(f.rank(), hqf::q_zero(r));
        for (auto& x : m) x = hqf::random_qelt(r, g);
        const hqf::Scalar lhs = hqf::eval_q(f, hqf::qmat_apply(r, sim.gamma1, m));
        const hqf::Scalar rhs = hqf::s_mul(r, sim.gamma2, hqf::eval_q(std_form, m));
        if (!(lhs == rhs)) random_ok = false;
    }
    return json{{"v", 1},
                {"gamma1", hqf::similitude_to_json(r, sim)["gamma1"]},
                {"gamma2", hqf::similitude_to_json(r, sim)["gamma2"]},
                {"checks",
                 json{{"basis_identity", basis_ok},
                      {"matrix_identity", hqf::is_similitude(std_form, f, sim)},
                      {"random_vectors", random_count},
                      {"random_vectors_ok", random_ok}}}};
}

json run_lift(json doc, const std::string& preset) {
    hqf::require_fields(doc, "lift input", {"v", "form", "similitude", "from_precision"});
    json fobj = doc["form"];
    apply_preset(fobj, preset);
    const hqf::HermForm f = hqf::form_from_json(fobj);
    if (!doc["from_precision"].is_number_unsigned())
        hqf::raise(hqf::errc::parse_error, "from_precision: expected a nonnegative integer");
    const unsigned from_prec = doc["from_precision"].get<unsigned>();
    if (from_prec == 0 || from_prec > f.ring().precision())
        hqf::raise(hqf::errc::precision_mismatch, "from_precision out of range");
    const hqf::ring_ptr low = hqf::change_precision(f.ring(), from_prec);
    const hqf::Similitude sim_low =
        hqf::similitude_from_json(*low, f.rank(), doc["similitude"]);
    const hqf::Similitude lifted = hqf::lift_similitude(f, sim_low, from_prec);

    const hqf::RingSpec& r = f.ring();
    const hqf::HermForm std_form = hqf::standard_form(f.ring_handle(), f.rank());
    bool trunc_ok = hqf::s_truncate(*low, r, lifted.gamma2) == sim_low.gamma2;
    for (unsigned i = 0; i < f.rank() * f.rank(); ++i) {
        if (!(hqf::s_truncate(*low, r, lifted.gamma1.e[i].a) == sim_low.gamma1.e[i].a) ||
            !(hqf::s_truncate(*low, r, lifted.gamma1.e[i].b) == sim_low.gamma1.e[i].b))
            trunc_ok = false;
    }
    return json{{"v", 1},
                {"similitude", hqf::similitude_to_json(r, lifted)},
                {"checks",
                 json{{"valid_at_full_precision", hqf::is_similitude(std_form, f, lifted)},
                      {"truncation_matches", trunc_ok}}}};
}

json run_similar(json doc, const std::string& preset) {
    hqf::require_fields(doc, "similar input", {"v", "form1", "form2"});
    json f1obj = doc["form1"], f2obj = doc["form2"];
    apply_preset(f1obj, preset);
    apply_preset(f2obj, preset);
    const hqf::HermForm f1 = hqf::form_from_json(f1obj);
    const hqf::HermForm f2 = hqf::form_from_json(f2obj);
    const auto sim = hqf::are_similar(f1, f2);
    json out{{"v", 1}, {"similar", sim.has_value()}};
    out["similitude"] = sim ? hqf::similitude_to_json(f1.ring(), *sim) : json(nullptr);
    return out;
}

json polygon_to_json(const hqf::NewtonPolygon& np) {
    json segs = json::array();
    for (const auto& [slope, len] : np.segments)
        segs.push_back(json::array({hqf::frac_to_string(slope), len}));
    return json{{"pi_power", np.pi_power}, {"segments", segs}};
}

json run_series(json doc) {
    const hqf::TeichSeries a = hqf::series_from_json(doc);
    const auto deg = hqf::is_primitive(a);
    json out{{"v", 1},
             {"primitive_degree", deg ? json(*deg) : json(nullptr)},
             {"distinguished_deg1", hqf::is_distinguished_deg1(a)},
             {"crystalline", hqf::in_crystalline_ideal(a)}};
    // Preparation also covers pi-power multiples of primitive series, so it is
    // attempted regardless of the plain primitivity flag.
    out["weierstrass"] = nullptr;
    out["newton_polygon"] = nullptr;
    try {
        const hqf::WeierstrassFactorization w = hqf::weierstrass_prep(a);
        out["weierstrass"] = json{{"unit", hqf::series_to_json(w.unit)},
                                  {"poly", hqf::pipoly_to_json(*a.model, w.poly)}};
        out["newton_polygon"] = polygon_to_json(hqf::newton_polygon(*a.model, w.poly));
    } catch (const hqf::hqf_error& e) {
        if (e.kind() != hqf::errc::not_primitive) throw;
    }
    return out;
}

json run_factor(json doc) {
    const hqf::TeichSeries a = hqf::series_from_json(doc);
    const hqf::OCModel& M = *a.model;
    const hqf::WeierstrassFactorization w = hqf::weierstrass_prep(a);
    const hqf::FactorResult f = hqf::factor_linear(M, w.poly);
    json roots = json::array();
    for (const auto& [root, mult] : f.roots)
        roots.push_back(json{{"root", hqf::monoelt_to_json(M, root)}, {"multiplicity", mult}});
    return json{{"v", 1},
                {"unit", hqf::series_to_json(w.unit)},
                {"poly", hqf::pipoly_to_json(M, w.poly)},
                {"roots", roots},
                {"remainder", hqf::pipoly_to_json(M, f.remainder)},
                {"complete", f.complete}};
}

json run_cochar_sp(json doc) {
    hqf::require_fields(doc, "cochar-sp input", {"v", "rank", "generators", "mu"});
    const hqf::LatticeAction act =
        hqf::action_from_json(json{{"rank", doc["rank"]}, {"generators", doc["generators"]}});
    if (!doc["mu"].is_array() || doc["mu"].size() != act.rank)
        hqf::raise(hqf::errc::parse_error, "mu: expected an array of length rank");
    std::vector<mpz_class> mu;
    for (const auto& e : doc["mu"]) mu.push_back(mpz_from_json(e, "mu entry"));
    const hqf::CoinvResult coinv = hqf::coinvariants(act);
    json torsion = json::array();
    for (const auto& d : coinv.torsion) torsion.push_back(d.get_str());
    return json{{"v", 1},
                {"free_rank", coinv.free_rank},
                {"torsion", torsion},
                {"sp", hqf::sp_to_json(hqf::sp(coinv, mu))}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact hermitian forms over ramified quadratic extensions, truncated "
                 "pi-adic series, and cocharacter specialization"};
    app.require_subcommand(1);

    std::string in_path = "-", out_path = "-", preset;
    auto add_common = [&](CLI::App* sub, bool takes_preset) {
        sub->add_option("-i,--input", in_path, "input JSON path, or - for stdin");
        sub->add_option("-o,--output", out_path, "output path, or - for stdout");
        if (takes_preset)
            sub->add_option("--ring-preset", preset,
                            "q2i, q2sqrt2, or qp-sqrt-p:<p>; supplies the ring when the "
                            "form omits it");
    };

    CLI::App* c_validate =
        app.add_subcommand("validate", "check a form document against the hermitian constraints");
    add_common(c_validate, true);
    CLI::App* c_disc =
        app.add_subcommand("disc", "Gram determinant, divided discriminant, nondegeneracy");
    add_common(c_disc, true);
    CLI::App* c_reduce =
        app.add_subcommand("reduce", "similitude from the standard form onto the input form");
    add_common(c_reduce, true);
    CLI::App* c_lift = app.add_subcommand(
        "lift", "lift a low-precision similitude of a form to full precision");
    add_common(c_lift, true);
    CLI::App* c_similar =
        app.add_subcommand("similar", "decide similarity of two forms and produce a witness");
    add_common(c_similar, true);
    CLI::App* c_series = app.add_subcommand(
        "series", "primitivity, distinguished/crystalline flags, Weierstrass data");
    add_common(c_series, false);
    CLI::App* c_factor =
        app.add_subcommand("factor", "Weierstrass preparation plus linear factor extraction");
    add_common(c_factor, false);
    CLI::App* c_cochar = app.add_subcommand(
        "cochar-sp", "coinvariant lattice of a cocharacter action and the class of mu");
    add_common(c_cochar, false);
    CLI::App* c_selftest =
        app.add_subcommand("selftest", "run the acceptance suite and print one line per criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(c_selftest)) return hqf::run_selftest(std::cout);

        json doc = hqf::parse_document(read_all(in_path));
        hqf::require_v1(doc);
        json out;
        if (app.got_subcommand(c_validate)) out = run_validate(std::move(doc), preset);
        else if (app.got_subcommand(c_disc)) out = run_disc(std::move(doc), preset);
        else if (app.got_subcommand(c_reduce)) out = run_reduce(std::move(doc), preset);
        else if (app.got_subcommand(c_lift)) out = run_lift(std::move(doc), preset);
        else if (app.got_subcommand(c_similar)) out = run_similar(std::move(doc), preset);
        else if (app.got_subcommand(c_series)) out = run_series(std::move(doc));
        else if (app.got_subcommand(c_factor)) out = run_factor(std::move(doc));
        else if (app.got_subcommand(c_cochar)) out = run_cochar_sp(std::move(doc));
        write_all(out_path, out.dump(2) + "\n");
        return 0;
    } catch (const hqf::hqf_error& e) {
        if (e.kind() == hqf::errc::parse_error) {
            std::cerr << "error: " << e.detail() << "\n";
            return 1;
        }
        try {
            write_all(out_path, hqf::error_to_json(e).dump(2) + "\n");
        } catch (...) {
            std::cerr << hqf::error_to_json(e).dump(2) << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
