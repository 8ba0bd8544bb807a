#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hqf/ff.hpp"

namespace hqf {

// A truncated local base ring R together with the images (t, pi) of the
// trace and norm of Pi, presenting the ramified quadratic extension
// R[Pi]/(Pi^2 - t*Pi + pi).  Two kinds:
//   zmod       Z/p^N          (canonical reps in [0, p^N))
//   polytrunc  F_q[z]/(z^N)   (dense little-endian coefficient vectors, length N)
enum class ring_kind { zmod, polytrunc };

// Canonical representative of a base-ring element.  The active payload is
// decided by the ring's kind; the other stays default-constructed.  Equality
// is representative equality — exact, no tolerance.
struct Scalar {
    mpz_class z;
    std::vector<std::uint32_t> c;
    bool operator==(const Scalar&) const = default;
};

class RingSpec;
using ring_ptr = std::shared_ptr<const RingSpec>;

class RingSpec {
public:
    // t and pi may be any integers / short coefficient arrays; they are
    // reduced canonically.  Both must be non-units (ramified extension), which
    // also forces them nilpotent in the truncation.
    static ring_ptr make_zmod(unsigned p, unsigned prec, const mpz_class& t, const mpz_class& pi);
    static ring_ptr make_polytrunc(std::uint32_t q, unsigned prec, std::vector<std::uint32_t> t,
                                   std::vector<std::uint32_t> pi);

    // Documented presets.
    static ring_ptr preset_q2i();                 // p=2, t=2, pi=2,  N=6   (~ Q_2(i))
    static ring_ptr preset_q2sqrt2();             // p=2, t=0, pi=-2, N=8   (~ Q_2(sqrt 2))
    static ring_ptr preset_qp_sqrt_p(unsigned p); // odd p, t=0, pi=p, N=5  (~ Q_p(sqrt -p))

    ring_kind kind() const noexcept { return kind_; }
    unsigned p() const noexcept { return p_; }
    unsigned precision() const noexcept { return prec_; }
    const mpz_class& modulus() const noexcept { return modulus_; } // zmod: p^N
    const ff::field& coeff_field() const noexcept { return fq_; }  // polytrunc
    const Scalar& t() const noexcept { return t_; }
    const Scalar& pi() const noexcept { return pi_; }
    const Scalar& theta() const noexcept { return theta_; } // 4*pi - t^2
    unsigned theta_val() const noexcept { return theta_val_; } // = precision() if theta == 0

    bool operator==(const RingSpec& o) const noexcept;

private:
    ring_kind kind_ = ring_kind::zmod;
    unsigned p_ = 0;
    unsigned prec_ = 0;
    mpz_class modulus_;
    ff::field fq_;
    Scalar t_, pi_, theta_;
    unsigned theta_val_ = 0;

    RingSpec() = default;
    void finish_init();
};

// Same parameters at lower precision; new_prec must be in [1, precision()].
// Raising precision is not a well-defined coercion (reps were reduced) and is
// rejected; lifting works from a given high-precision ring instead.
ring_ptr change_precision(const RingSpec& r, unsigned new_prec);

// ---- base-ring scalar operations ----

Scalar s_zero(const RingSpec& r);
Scalar s_one(const RingSpec& r);
Scalar s_from_int(const RingSpec& r, long v);
Scalar s_from_mpz(const RingSpec& r, const mpz_class& v);          // zmod only
Scalar s_from_coeffs(const RingSpec& r, std::vector<std::uint32_t> c); // polytrunc only

Scalar s_add(const RingSpec& r, const Scalar& a, const Scalar& b);
Scalar s_sub(const RingSpec& r, const Scalar& a, const Scalar& b);
Scalar s_neg(const RingSpec& r, const Scalar& a);
Scalar s_mul(const RingSpec& r, const Scalar& a, const Scalar& b);
bool s_is_zero(const RingSpec& r, const Scalar& a);
bool s_is_unit(const RingSpec& r, const Scalar& a);
// Exact inverse of a unit; raises not_a_unit otherwise.
Scalar s_invert_unit(const RingSpec& r, const Scalar& a);
// pi-adic valuation of the canonical representative, capped at precision
// (the zero element reports precision()).
unsigned s_val(const RingSpec& r, const Scalar& a);

// Truncation coercion: reduce a scalar of `src` to the lower-precision ring
// `dst` (same kind and parameters mod the lower precision).
Scalar s_truncate(const RingSpec& dst, const RingSpec& src, const Scalar& a);
// Canonical lift: reinterpret a low-precision representative in the
// higher-precision ring `dst` (representative unchanged, zero-padded).
Scalar s_lift(const RingSpec& dst, const RingSpec& src, const Scalar& a);

// ---- quadratic extension ----

// a + b*Pi with Pi^2 = t*Pi - pi.
struct QElt {
    Scalar a, b;
    bool operator==(const QElt&) const = default;
};

QElt q_zero(const RingSpec& r);
QElt q_one(const RingSpec& r);
QElt q_from_scalar(const RingSpec& r, Scalar a);
QElt q_from_parts(Scalar a, Scalar b);
QElt q_pi_elt(const RingSpec& r); // Pi itself

QElt q_add(const RingSpec& r, const QElt& x, const QElt& y);
QElt q_sub(const RingSpec& r, const QElt& x, const QElt& y);
QElt q_neg(const RingSpec& r, const QElt& x);
QElt q_scale(const RingSpec& r, const Scalar& c, const QElt& x);
bool q_is_zero(const RingSpec& r, const QElt& x);

// (a1+b1 Pi)(a2+b2 Pi) = (a1 a2 - pi b1 b2) + (a1 b2 + a2 b1 + t b1 b2) Pi.
QElt qext_mul(const RingSpec& r, const QElt& x, const QElt& y);
// conj(a + b Pi) = (a + t b) - b Pi.
QElt qext_conj(const RingSpec& r, const QElt& x);
// (norm, trace) = (x conj(x), x + conj(x)); both land in the base ring.
std::pair<Scalar, Scalar> qext_norm_trace(const RingSpec& r, const QElt& x);
Scalar qext_norm(const RingSpec& r, const QElt& x);
Scalar qext_trace(const RingSpec& r, const QElt& x);
bool q_is_unit(const RingSpec& r, const QElt& x); // iff norm is a unit
// Exact inverse conj(x)/norm(x); raises not_a_unit when norm is a non-unit.
QElt invert_unit(const RingSpec& r, const QElt& x);

// ---- small dense matrices over the extension ----

struct QMatrix {
    unsigned n = 0;
    std::vector<QElt> e; // row-major, columns are images of basis vectors

    QElt& at(unsigned i, unsigned j) { return e[std::size_t(i) * n + j]; }
    const QElt& at(unsigned i, unsigned j) const { return e[std::size_t(i) * n + j]; }
    bool operator==(const QMatrix&) const = default;
};

using HVector = std::vector<QElt>;

QMatrix qmat_identity(const RingSpec& r, unsigned n);
QMatrix qmat_mul(const RingSpec& r, const QMatrix& x, const QMatrix& y);
HVector qmat_apply(const RingSpec& r, const QMatrix& m, const HVector& v);
// Gauss–Jordan with unit-norm pivots; over a local ring this succeeds exactly
// when the matrix is invertible.  Raises not_a_unit otherwise.
QMatrix qmat_inverse(const RingSpec& r, const QMatrix& m);

} // namespace hqf
