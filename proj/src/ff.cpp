#include "hqf/ff.hpp"

#include "hqf/errors.hpp"

namespace hqf::ff {

namespace {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Polynomials over F_p as little-endian digit vectors, trailing zeros trimmed.
using poly = std::vector<std::uint32_t>;

void trim(poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

poly poly_mod(poly a, const poly& m, std::uint32_t p) {
    trim(a);
    while (a.size() >= m.size()) {
        // m is monic, so the quotient digit is just the leading digit of a.
        std::uint32_t lead = a.back();
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::uint64_t sub = std::uint64_t(lead) * m[i] % p;
            a[shift + i] = std::uint32_t((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

poly poly_mulmod(const poly& a, const poly& b, const poly& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = std::uint32_t((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    return poly_mod(std::move(r), m, p);
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(const poly& f, std::uint32_t p) {
    std::uint32_t deg = std::uint32_t(f.size()) - 1;
    for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            poly g(d + 1, 0);
            g[d] = 1;
            std::uint64_t v = idx;
            for (std::uint32_t i = 0; i < d; ++i) {
                g[i] = std::uint32_t(v % p);
                v /= p;
            }
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace

field field::make(std::uint32_t q) {
    if (q < 2) raise(errc::parse_error, "field order must be at least 2");
    std::uint32_t p = 0;
    for (std::uint32_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q; // q itself is prime
    if (!is_prime(p)) raise(errc::parse_error, "field order is not a prime power");
    std::uint32_t m = 0, t = q;
    while (t > 1) {
        if (t % p != 0) raise(errc::parse_error, "field order is not a prime power");
        t /= p;
        ++m;
    }
    if (m > 16 || q > (1u << 20))
        raise(errc::support_overflow, "field order exceeds the desk-scale bound");

    field f;
    f.p_ = p;
    f.m_ = m;
    f.q_ = q;
    // Smallest monic irreducible, scanning coefficient tuples high-degree-first.
    if (m == 1) {
        f.mod_ = {0, 1}; // w itself; F_p[w]/(w) = F_p
        return f;
    }
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        poly cand(m + 1, 0);
        cand[m] = 1;
        std::uint64_t v = idx;
        for (std::uint32_t i = 0; i < m; ++i) { // idx digits high-degree-first
            cand[m - 1 - i] = std::uint32_t(v % p);
            v /= p;
        }
        if (is_irreducible(cand, p)) {
            f.mod_ = std::move(cand);
            return f;
        }
    }
    raise(errc::parse_error, "no irreducible modulus found"); // unreachable
}

std::vector<std::uint32_t> field::digits(std::uint32_t a) const {
    std::vector<std::uint32_t> d(m_, 0);
    for (std::uint32_t i = 0; i < m_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

std::uint32_t field::from_digits(const std::vector<std::uint32_t>& d) const {
    std::uint32_t a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p_ + d[i];
    return a;
}

std::uint32_t field::add(std::uint32_t a, std::uint32_t b) const {
    auto da = digits(a), db = digits(b);
    for (std::uint32_t i = 0; i < m_; ++i) da[i] = (da[i] + db[i]) % p_;
    return from_digits(da);
}

std::uint32_t field::neg(std::uint32_t a) const {
    auto da = digits(a);
    for (std::uint32_t i = 0; i < m_; ++i) da[i] = (p_ - da[i]) % p_;
    return from_digits(da);
}

std::uint32_t field::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t field::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    poly pa = digits(a), pb = digits(b);
    trim(pa);
    trim(pb);
    poly r = poly_mulmod(pa, pb, mod_, p_);
    r.resize(m_, 0);
    return from_digits(r);
}

std::uint32_t field::pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint32_t field::inv(std::uint32_t a) const {
    if (a == 0) raise(errc::not_a_unit, "inverse of zero in the coefficient field");
    return pow(a, q_ - 2);
}

std::uint32_t field::from_int(std::int64_t v) const {
    std::int64_t r = v % std::int64_t(p_);
    if (r < 0) r += p_;
    return std::uint32_t(r);
}

} // namespace hqf::ff
