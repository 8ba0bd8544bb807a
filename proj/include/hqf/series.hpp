#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hqf/ff.hpp"

namespace hqf {

// Exact rational (used for valuations and Newton-polygon slopes), kept in
// lowest terms with a positive denominator.
struct Frac {
    long long num = 0;
    unsigned long long den = 1;

    static Frac make(long long num, unsigned long long den);
    bool operator==(const Frac&) const = default;
    bool operator<(const Frac& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
};

// Desk-scale model of O_C: finitely supported sums of monomials c * t^(e/maxden)
// over F_q, with exponents counted in integer units of s = t^(1/maxden).
// maxden must be a power of the field characteristic.  sbound is the support
// guard: the iterative algorithms (Weierstrass back-substitution, Newton root
// refinement) work with s-exponents below sbound and fail honestly with
// support_overflow instead of silently truncating.
class OCModel {
public:
    static std::shared_ptr<const OCModel> make(std::uint32_t q, unsigned maxden,
                                               unsigned sbound = 512);

    const ff::field& F() const noexcept { return F_; }
    unsigned maxden() const noexcept { return maxden_; }
    unsigned sbound() const noexcept { return sbound_; }

    bool operator==(const OCModel& o) const noexcept {
        return F_ == o.F_ && maxden_ == o.maxden_;
    }

private:
    OCModel() = default;
    ff::field F_;
    unsigned maxden_ = 1;
    unsigned sbound_ = 512;
};

using oc_ptr = std::shared_ptr<const OCModel>;

// Element of the coefficient model: terms (s-exponent, nonzero coefficient),
// sorted by exponent, exponents distinct and nonnegative.
struct MonoElt {
    std::vector<std::pair<std::int64_t, std::uint32_t>> terms;
    bool operator==(const MonoElt&) const = default;
};

MonoElt m_zero();
MonoElt m_one();
// Canonicalize: sort, merge equal exponents, drop zeros; validates ranges.
MonoElt m_make(const OCModel& M, std::vector<std::pair<std::int64_t, std::uint32_t>> terms);
MonoElt m_monomial(const OCModel& M, std::uint32_t coeff, std::int64_t sexp);

bool m_is_zero(const MonoElt& a);
MonoElt m_add(const OCModel& M, const MonoElt& a, const MonoElt& b);
MonoElt m_neg(const OCModel& M, const MonoElt& a);
MonoElt m_sub(const OCModel& M, const MonoElt& a, const MonoElt& b);
MonoElt m_mul(const OCModel& M, const MonoElt& a, const MonoElt& b);
// Valuation in s-units; nullopt for zero.
std::optional<std::int64_t> m_val_s(const MonoElt& a);
bool m_is_unit(const MonoElt& a);   // valuation exactly 0
bool m_in_mc(const MonoElt& a);     // zero or positive valuation
// Valuation as a rational in t-units; raises zero_input on zero.  This is the
// coset invariant of C^x / O_C^x.
Frac coset_invariant(const OCModel& M, const MonoElt& a);

// Truncated helpers for the Newton iteration: everything at s-exponents < bound.
MonoElt m_trunc(const MonoElt& a, std::int64_t bound);
MonoElt m_inv_trunc(const OCModel& M, const MonoElt& a, std::int64_t bound);  // unit a
// num/den to the given bound; requires val(num) >= val(den); raises
// not_divisible otherwise.
MonoElt m_div_trunc(const OCModel& M, const MonoElt& num, const MonoElt& den,
                    std::int64_t bound);

// Truncated pi-power series a = sum_{i<prec} [a_i] pi^i with MonoElt
// coefficients; the length of coeffs is the precision.
struct TeichSeries {
    oc_ptr model;
    std::vector<MonoElt> coeffs;

    unsigned prec() const noexcept { return unsigned(coeffs.size()); }
    bool operator==(const TeichSeries& o) const {
        return *model == *o.model && coeffs == o.coeffs;
    }
};

TeichSeries series_make(oc_ptr model, std::vector<MonoElt> coeffs);
TeichSeries series_add(const TeichSeries& a, const TeichSeries& b);
// Cauchy product truncated at the common precision (equal-characteristic:
// coefficientwise, no carries).
TeichSeries series_mul(const TeichSeries& a, const TeichSeries& b);

// Least index with a unit coefficient, provided a_0 != 0; nullopt otherwise.
std::optional<unsigned> is_primitive(const TeichSeries& a);
// a = u (pi - [w]) for a unit u and w in m_C (zero allowed): a_0 in m_C and
// a_1 a unit.
bool is_distinguished_deg1(const TeichSeries& a);
// Every stored coefficient in m_C.
bool in_crystalline_ideal(const TeichSeries& a);

// Monic pi-polynomial, little-endian coefficients (last = 1).
using PiPoly = std::vector<MonoElt>;

struct WeierstrassFactorization {
    TeichSeries unit; // constant coefficient a unit
    PiPoly poly;      // monic, lower coefficients in m_C
};

// Exact factorization a = unit * poly at the stored precision.  Leading zero
// pi-coefficients are folded into poly as a pi-power factor (their count plus
// the primitive degree of the rest is poly's degree).  Canonical normalization:
// the unit is a pi-polynomial of length prec - deg(poly), which pins the
// otherwise non-unique truncated factorization and makes the result exact and
// deterministic.  Raises not_primitive (no unit coefficient at all, or zero)
// and support_overflow (no factorization with support below the model bound).
WeierstrassFactorization weierstrass_prep(const TeichSeries& a);

// Lower convex hull of (i, val c_i) for a monic pi-polynomial, after factoring
// out the pi-power carried by leading zero coefficients.  Segments are
// (root valuation, length) in ascending valuation order.
struct NewtonPolygon {
    unsigned pi_power = 0;
    std::vector<std::pair<Frac, unsigned>> segments;
    bool operator==(const NewtonPolygon&) const = default;
};
NewtonPolygon newton_polygon(const OCModel& M, const PiPoly& P);

// Degree-1 factor extraction: for each width-1 polygon segment passing the
// Hensel criterion v(P(w0)) > 2 v(P'(w0)), Newton-refine the leading-monomial
// start to an exact root and deflate.  Partial output (complete = false, the
// unfactored remainder returned) when segments are wide or inseparable —
// never an error.
struct FactorResult {
    std::vector<std::pair<MonoElt, unsigned>> roots; // (w, multiplicity)
    PiPoly remainder;
    bool complete = false;
};
FactorResult factor_linear(const OCModel& M, const PiPoly& P);

MonoElt poly_eval(const OCModel& M, const PiPoly& P, const MonoElt& x);
PiPoly poly_derivative(const OCModel& M, const PiPoly& P);

} // namespace hqf
