#include "hqf/series.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hqf/errors.hpp"

namespace hqf {

namespace {

long long llgcd(long long a, long long b) {
    while (b != 0) {
        long long r = a % b;
        a = b;
        b = r;
    }
    return a < 0 ? -a : a;
}

} // namespace

Frac Frac::make(long long num, unsigned long long den) {
    if (den == 0) raise(errc::constraint_violation, "fraction with zero denominator");
    if (num == 0) return Frac{0, 1};
    long long g = llgcd(num, static_cast<long long>(den));
    return Frac{num / g, den / static_cast<unsigned long long>(g)};
}

oc_ptr OCModel::make(std::uint32_t q, unsigned maxden, unsigned sbound) {
    auto F = ff::field::make(q);
    if (maxden == 0) raise(errc::constraint_violation, "maxden must be positive");
    unsigned m = maxden;
    while (m % F.p() == 0) m /= F.p();
    if (m != 1)
        raise(errc::constraint_violation,
              "maxden must be a power of the characteristic " + std::to_string(F.p()));
    if (sbound < 2 || sbound > (1u << 20))
        raise(errc::constraint_violation, "support bound out of range");
    auto out = std::shared_ptr<OCModel>(new OCModel());
    out->F_ = F;
    out->maxden_ = maxden;
    out->sbound_ = sbound;
    return out;
}

MonoElt m_zero() { return MonoElt{}; }

MonoElt m_one() { return MonoElt{{{0, 1}}}; }

MonoElt m_make(const OCModel& M, std::vector<std::pair<std::int64_t, std::uint32_t>> terms) {
    for (auto& [e, c] : terms) {
        if (e < 0) raise(errc::constraint_violation, "negative monomial exponent");
        if (c >= M.F().q()) raise(errc::constraint_violation, "coefficient out of range");
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    MonoElt out;
    for (const auto& [e, c] : terms) {
        if (!out.terms.empty() && out.terms.back().first == e)
            out.terms.back().second = M.F().add(out.terms.back().second, c);
        else
            out.terms.emplace_back(e, c);
        if (out.terms.back().second == 0) out.terms.pop_back();
    }
    return out;
}

MonoElt m_monomial(const OCModel& M, std::uint32_t coeff, std::int64_t sexp) {
    return m_make(M, {{sexp, coeff}});
}

bool m_is_zero(const MonoElt& a) { return a.terms.empty(); }

MonoElt m_add(const OCModel& M, const MonoElt& a, const MonoElt& b) {
    MonoElt out;
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() ||
            (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
            out.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
            out.terms.push_back(b.terms[j++]);
        } else {
            std::uint32_t c = M.F().add(a.terms[i].second, b.terms[j].second);
            if (c != 0) out.terms.emplace_back(a.terms[i].first, c);
            ++i;
            ++j;
        }
    }
    return out;
}

MonoElt m_neg(const OCModel& M, const MonoElt& a) {
    MonoElt out = a;
    for (auto& [e, c] : out.terms) c = M.F().neg(c);
    return out;
}

MonoElt m_sub(const OCModel& M, const MonoElt& a, const MonoElt& b) {
    return m_add(M, a, m_neg(M, b));
}

MonoElt m_mul(const OCModel& M, const MonoElt& a, const MonoElt& b) {
    if (a.terms.size() * b.terms.size() > 4'000'000)
        raise(errc::support_overflow, "product support exceeds the desk-scale guard");
    std::vector<std::pair<std::int64_t, std::uint32_t>> acc;
    acc.reserve(a.terms.size() * b.terms.size());
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms)
            acc.emplace_back(ea + eb, M.F().mul(ca, cb));
    return m_make(M, std::move(acc));
}

std::optional<std::int64_t> m_val_s(const MonoElt& a) {
    if (a.terms.empty()) return std::nullopt;
    return a.terms.front().first;
}

bool m_is_unit(const MonoElt& a) {
    return !a.terms.empty() && a.terms.front().first == 0;
}

bool m_in_mc(const MonoElt& a) {
    return a.terms.empty() || a.terms.front().first > 0;
}

Frac coset_invariant(const OCModel& M, const MonoElt& a) {
    if (a.terms.empty()) raise(errc::zero_input, "coset invariant of zero");
    return Frac::make(a.terms.front().first, M.maxden());
}

MonoElt m_trunc(const MonoElt& a, std::int64_t bound) {
    MonoElt out;
    for (const auto& t : a.terms) {
        if (t.first >= bound) break;
        out.terms.push_back(t);
    }
    return out;
}

namespace {

// Shift every exponent by delta (negative allowed when no exponent drops
// below zero).
MonoElt m_shift(const MonoElt& a, std::int64_t delta) {
    MonoElt out = a;
    for (auto& [e, c] : out.terms) {
        if (e + delta < 0) raise(errc::not_divisible, "shift below valuation zero");
        e += delta;
    }
    return out;
}

} // namespace

MonoElt m_inv_trunc(const OCModel& M, const MonoElt& a, std::int64_t bound) {
    if (!m_is_unit(a)) raise(errc::not_a_unit, "inverse of a non-unit coefficient");
    std::uint32_t inv0 = M.F().inv(a.terms.front().second);
    MonoElt u;
    for (const auto& [e, c] : a.terms) {
        if (e >= bound) break;
        u.terms.emplace_back(e, M.F().mul(c, inv0));
    }
    // Newton inverse doubling: x <- x (1 + (1 - u x)), quadratic convergence
    // in the s-adic filtration, characteristic-independent.
    MonoElt x = m_one();
    std::int64_t cur = 1;
    while (cur < bound) {
        cur = std::min<std::int64_t>(2 * cur, bound);
        MonoElt e = m_sub(M, m_one(), m_trunc(m_mul(M, u, x), cur));
        x = m_trunc(m_add(M, x, m_mul(M, x, e)), cur);
    }
    for (auto& [e, c] : x.terms) c = M.F().mul(c, inv0);
    return x;
}

MonoElt m_div_trunc(const OCModel& M, const MonoElt& num, const MonoElt& den,
                    std::int64_t bound) {
    if (m_is_zero(den)) raise(errc::not_divisible, "division by zero coefficient");
    if (m_is_zero(num)) return m_zero();
    std::int64_t vd = den.terms.front().first;
    if (num.terms.front().first < vd)
        raise(errc::not_divisible, "quotient would have negative valuation");
    MonoElt nu = m_shift(num, -vd);
    MonoElt du = m_shift(den, -vd);
    return m_trunc(m_mul(M, nu, m_inv_trunc(M, du, bound)), bound);
}

TeichSeries series_make(oc_ptr model, std::vector<MonoElt> coeffs) {
    if (!model) raise(errc::constraint_violation, "series without a model");
    if (coeffs.empty()) raise(errc::constraint_violation, "series precision must be positive");
    return TeichSeries{std::move(model), std::move(coeffs)};
}

namespace {

void check_same_model(const TeichSeries& a, const TeichSeries& b) {
    if (!(*a.model == *b.model)) raise(errc::ring_mismatch, "series over different models");
    if (a.prec() != b.prec())
        raise(errc::precision_mismatch, "series of different precision");
}

} // namespace

TeichSeries series_add(const TeichSeries& a, const TeichSeries& b) {
    check_same_model(a, b);
    std::vector<MonoElt> out(a.prec());
    for (unsigned i = 0; i < a.prec(); ++i) out[i] = m_add(*a.model, a.coeffs[i], b.coeffs[i]);
    return TeichSeries{a.model, std::move(out)};
}

TeichSeries series_mul(const TeichSeries& a, const TeichSeries& b) {
    check_same_model(a, b);
    const auto& M = *a.model;
    std::vector<MonoElt> out(a.prec());
    for (unsigned i = 0; i < a.prec(); ++i)
        for (unsigned j = 0; i + j < a.prec(); ++j)
            out[i + j] = m_add(M, out[i + j], m_mul(M, a.coeffs[i], b.coeffs[j]));
    return TeichSeries{a.model, std::move(out)};
}

std::optional<unsigned> is_primitive(const TeichSeries& a) {
    if (m_is_zero(a.coeffs[0])) return std::nullopt;
    for (unsigned i = 0; i < a.prec(); ++i)
        if (m_is_unit(a.coeffs[i])) return i;
    return std::nullopt;
}

bool is_distinguished_deg1(const TeichSeries& a) {
    if (a.prec() < 2) return false;
    return m_in_mc(a.coeffs[0]) && m_is_unit(a.coeffs[1]);
}

bool in_crystalline_ideal(const TeichSeries& a) {
    return std::all_of(a.coeffs.begin(), a.coeffs.end(),
                       [](const MonoElt& c) { return m_in_mc(c); });
}

namespace {

// Dense layer view: layers[l][i] is the coefficient of s^l inside the
// pi^i coefficient.  Terms at or above the support bound are left out of the
// layered system; the final exact reconstruction check still sees them.
std::vector<std::vector<std::uint32_t>> to_layers(const OCModel& M,
                                                  const std::vector<MonoElt>& coeffs) {
    unsigned S = M.sbound();
    std::vector<std::vector<std::uint32_t>> layers(S,
        std::vector<std::uint32_t>(coeffs.size(), 0));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (const auto& [e, c] : coeffs[i].terms)
            if (e < static_cast<std::int64_t>(S)) layers[std::size_t(e)][i] = c;
    return layers;
}

std::vector<std::uint32_t> layer_conv(const ff::field& F,
                                      const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b,
                                      std::size_t out_len) {
    std::vector<std::uint32_t> out(out_len, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < out_len; ++j)
            if (b[j] != 0) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
    return out;
}

MonoElt from_layers(const OCModel& M, const std::vector<std::vector<std::uint32_t>>& L,
                    std::size_t pos) {
    std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
    for (std::size_t l = 0; l < L.size(); ++l)
        if (L[l][pos] != 0) terms.emplace_back(std::int64_t(l), L[l][pos]);
    return m_make(M, std::move(terms));
}

} // namespace

WeierstrassFactorization weierstrass_prep(const TeichSeries& a) {
    const OCModel& M = *a.model;
    const ff::field& F = M.F();
    const unsigned N = a.prec();

    // Fold leading zero pi-coefficients into the polynomial as a pi-power.
    unsigned strip = 0;
    while (strip < N && m_is_zero(a.coeffs[strip])) ++strip;
    if (strip == N) raise(errc::not_primitive, "zero series");
    std::vector<MonoElt> body(a.coeffs.begin() + strip, a.coeffs.end());
    const unsigned Mlen = N - strip;

    unsigned d = Mlen;
    for (unsigned i = 0; i < Mlen; ++i)
        if (m_is_unit(body[i])) { d = i; break; }
    if (d == Mlen)
        raise(errc::not_primitive, "no unit coefficient (crystalline after a pi-power)");

    const unsigned S = M.sbound();
    auto aL = to_layers(M, body);
    std::uint32_t alpha = aL[0][d];
    std::uint32_t alpha_inv = F.inv(alpha);

    // Solve body = Q (pi^d + c) layer by layer in the s-adic grading; deg Q is
    // pinned to Mlen - 1 - d, which makes the system square and the lifted
    // factorization exact.
    std::vector<std::vector<std::uint32_t>> QL(S, std::vector<std::uint32_t>(Mlen - d, 0));
    std::vector<std::vector<std::uint32_t>> cL(S, std::vector<std::uint32_t>(d, 0));
    for (unsigned j = d; j < Mlen; ++j) QL[0][j - d] = aL[0][j];

    auto any_nz = [](const std::vector<std::uint32_t>& v) {
        return std::any_of(v.begin(), v.end(), [](std::uint32_t x) { return x != 0; });
    };
    // occupancy flags keep the layer cascade proportional to the actual
    // support instead of the full bound
    std::vector<char> q_nz(S, 0), c_nz(S, 0);
    q_nz[0] = any_nz(QL[0]);

    for (unsigned l = 1; l < S; ++l) {
        std::vector<std::uint32_t> rhs = aL[l];
        for (unsigned k1 = 1; k1 < l; ++k1) {
            if (!q_nz[k1] || !c_nz[l - k1]) continue;
            auto prod = layer_conv(F, QL[k1], cL[l - k1], Mlen);
            for (unsigned j = 0; j < Mlen; ++j) rhs[j] = F.sub(rhs[j], prod[j]);
        }
        if (!any_nz(rhs)) continue;
        // rhs = Q^l pi^d + Q^0 c^l: degrees below d determine c^l by the
        // alpha-triangular system, the rest reads off Q^l.
        for (unsigned j = 0; j < d; ++j) {
            std::uint32_t acc = rhs[j];
            for (unsigned i = 0; i < j; ++i)
                if (j - i < Mlen - d)
                    acc = F.sub(acc, F.mul(cL[l][i], QL[0][j - i]));
            cL[l][j] = F.mul(alpha_inv, acc);
        }
        for (unsigned j = d; j < Mlen; ++j) {
            std::uint32_t acc = rhs[j];
            for (unsigned i = 0; i < d && i <= j; ++i)
                if (j - i < Mlen - d)
                    acc = F.sub(acc, F.mul(cL[l][i], QL[0][j - i]));
            QL[l][j - d] = acc;
        }
        q_nz[l] = any_nz(QL[l]);
        c_nz[l] = any_nz(cL[l]);
    }

    std::vector<MonoElt> Q(Mlen - d), low(d);
    for (unsigned j = 0; j + d < Mlen; ++j) Q[j] = from_layers(M, QL, j);
    for (unsigned j = 0; j < d; ++j) low[j] = from_layers(M, cL, j);

    // Exact reconstruction check over the untruncated model: Q (pi^d + c)
    // must reproduce every stored coefficient, including any terms beyond the
    // layered window.
    std::vector<MonoElt> P(d + 1);
    for (unsigned j = 0; j < d; ++j) P[j] = low[j];
    P[d] = m_one();
    std::vector<MonoElt> recon(Mlen);
    for (unsigned i = 0; i < Q.size(); ++i)
        for (unsigned j = 0; j <= d; ++j)
            recon[i + j] = m_add(M, recon[i + j], m_mul(M, Q[i], P[j]));
    for (unsigned i = 0; i < Mlen; ++i)
        if (!(recon[i] == body[i]))
            raise(errc::support_overflow,
                  "no factorization with coefficient support below the model bound");

    std::vector<MonoElt> unit_coeffs(N);
    for (unsigned j = 0; j < Q.size(); ++j) unit_coeffs[j] = Q[j];
    PiPoly poly(strip, m_zero());
    poly.insert(poly.end(), P.begin(), P.end());
    return WeierstrassFactorization{TeichSeries{a.model, std::move(unit_coeffs)},
                                    std::move(poly)};
}

namespace {

struct HullPoint {
    std::int64_t x;
    std::int64_t v;
};

// Lower convex hull of the valuation points of a pi-polynomial with nonzero
// constant coefficient; vertices left to right.
std::vector<HullPoint> lower_hull(const PiPoly& P) {
    std::vector<HullPoint> pts;
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto v = m_val_s(P[i]);
        if (v) pts.push_back({std::int64_t(i), *v});
    }
    std::vector<HullPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            __int128 cross = static_cast<__int128>(b.x - a.x) * (p.v - a.v) -
                             static_cast<__int128>(b.v - a.v) * (p.x - a.x);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

void require_monic(const PiPoly& P) {
    if (P.empty() || !(P.back() == m_one()))
        raise(errc::constraint_violation, "pi-polynomial is not monic");
}

} // namespace

NewtonPolygon newton_polygon(const OCModel& M, const PiPoly& P) {
    require_monic(P);
    NewtonPolygon out;
    while (out.pi_power < P.size() && m_is_zero(P[out.pi_power])) ++out.pi_power;
    PiPoly body(P.begin() + out.pi_power, P.end());
    auto hull = lower_hull(body);
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        std::int64_t dx = hull[k + 1].x - hull[k].x;
        std::int64_t dv = hull[k].v - hull[k + 1].v;
        out.segments.emplace_back(
            Frac::make(dv, static_cast<unsigned long long>(dx) * M.maxden()),
            unsigned(dx));
    }
    std::reverse(out.segments.begin(), out.segments.end());
    return out;
}

MonoElt poly_eval(const OCModel& M, const PiPoly& P, const MonoElt& x) {
    if (P.empty()) return m_zero();
    MonoElt acc = P.back();
    for (std::size_t i = P.size() - 1; i-- > 0;)
        acc = m_add(M, m_mul(M, acc, x), P[i]);
    return acc;
}

PiPoly poly_derivative(const OCModel& M, const PiPoly& P) {
    PiPoly out;
    for (std::size_t i = 1; i < P.size(); ++i) {
        std::uint32_t k = M.F().from_int(static_cast<long long>(i));
        MonoElt c = P[i];
        for (auto& [e, cc] : c.terms) cc = M.F().mul(cc, k);
        MonoElt cleaned;
        for (const auto& t : c.terms)
            if (t.second != 0) cleaned.terms.push_back(t);
        out.push_back(std::move(cleaned));
    }
    return out;
}

namespace {

PiPoly deflate(const OCModel& M, const PiPoly& P, const MonoElt& w) {
    // synthetic division by (pi - w); remainder is P(w) and must vanish
    PiPoly Q(P.size() - 1);
    MonoElt carry = P.back();
    for (std::size_t i = P.size() - 1; i-- > 0;) {
        Q[i] = carry;
        carry = m_add(M, P[i], m_mul(M, w, carry));
    }
    if (!m_is_zero(carry))
        raise(errc::constraint_violation, "deflation with nonzero remainder");
    return Q;
}

// Hensel-guarded Newton refinement of the leading-monomial root candidate for
// a width-1 polygon segment.  Returns the exact root or nullopt.
std::optional<MonoElt> refine_root(const OCModel& M, const PiPoly& P, MonoElt w) {
    const std::int64_t S = M.sbound();
    MonoElt pw = poly_eval(M, P, w);
    if (m_is_zero(pw)) return w;
    PiPoly dP = poly_derivative(M, P);
    MonoElt dw = poly_eval(M, dP, w);
    if (m_is_zero(dw)) return std::nullopt;
    if (!(*m_val_s(pw) > 2 * *m_val_s(dw))) return std::nullopt;

    for (int iter = 0; iter < 64; ++iter) {
        pw = poly_eval(M, P, w);
        if (m_is_zero(pw)) return w;
        dw = poly_eval(M, dP, w);
        if (m_is_zero(dw) || *m_val_s(pw) < *m_val_s(dw)) return std::nullopt;
        MonoElt step = m_div_trunc(M, pw, dw, S);
        if (m_is_zero(step)) return std::nullopt; // stalled below the bound
        w = m_trunc(m_sub(M, w, step), S);
    }
    return std::nullopt;
}

void record_root(std::vector<std::pair<MonoElt, unsigned>>& roots, const MonoElt& w,
                 unsigned mult) {
    for (auto& [r, m] : roots)
        if (r == w) {
            m += mult;
            return;
        }
    roots.emplace_back(w, mult);
}

} // namespace

FactorResult factor_linear(const OCModel& M, const PiPoly& P) {
    require_monic(P);
    for (std::size_t i = 0; i + 1 < P.size(); ++i)
        if (!m_in_mc(P[i]))
            raise(errc::constraint_violation,
                  "lower coefficient " + std::to_string(i) + " is not topologically nilpotent");

    FactorResult out;
    PiPoly Q = P;
    bool progress = true;
    while (Q.size() > 1 && progress) {
        progress = false;
        if (m_is_zero(Q[0])) {
            unsigned k = 0;
            while (k + 1 < Q.size() && m_is_zero(Q[k])) ++k;
            record_root(out.roots, m_zero(), k);
            Q.erase(Q.begin(), Q.begin() + k);
            progress = true;
            continue;
        }
        auto hull = lower_hull(Q);
        // Walk segments in ascending root valuation, matching the order the
        // Newton polygon reports them.
        for (std::size_t e = hull.size() - 1; e-- > 0;) {
            if (hull[e + 1].x - hull[e].x != 1) continue;
            std::size_t i = std::size_t(hull[e].x), j = std::size_t(hull[e + 1].x);
            std::int64_t sexp = hull[e].v - hull[e + 1].v;
            std::uint32_t c = M.F().mul(M.F().neg(Q[i].terms.front().second),
                                        M.F().inv(Q[j].terms.front().second));
            auto root = refine_root(M, Q, m_monomial(M, c, sexp));
            if (!root) continue;
            unsigned mult = 0;
            while (Q.size() > 1 && m_is_zero(poly_eval(M, Q, *root))) {
                Q = deflate(M, Q, *root);
                ++mult;
            }
            record_root(out.roots, *root, mult);
            progress = true;
            break;
        }
    }
    out.remainder = Q;
    out.complete = (Q.size() == 1);
    return out;
}

} // namespace hqf
