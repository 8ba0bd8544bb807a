#pragma once

#include <cstdint>
#include <vector>

namespace hqf::ff {

// Small finite field F_q, q = p^m, realized as F_p[w]/(f) where f is the
// lexicographically smallest monic irreducible of degree m (coefficients
// compared from the highest degree below the leading term down to the
// constant).  Elements are encoded as integers in [0, q): the base-p digits
// of the index are the coefficients of 1, w, w^2, ... in order.
class field {
public:
    // q must be a prime power; degree is bounded so tables stay desk-sized.
    static field make(std::uint32_t q);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return m_; }
    std::uint32_t q() const noexcept { return q_; }
    // Modulus digits, little-endian, length degree()+1, leading digit 1.
    const std::vector<std::uint32_t>& modulus() const noexcept { return mod_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
    // Raises not_a_unit on 0.
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t from_int(std::int64_t v) const; // image of an integer

    bool operator==(const field& o) const noexcept { return q_ == o.q_; }

private:
    std::uint32_t p_ = 0, m_ = 0, q_ = 0;
    std::vector<std::uint32_t> mod_;

    std::vector<std::uint32_t> digits(std::uint32_t a) const;
    std::uint32_t from_digits(const std::vector<std::uint32_t>& d) const;
};

} // namespace hqf::ff
