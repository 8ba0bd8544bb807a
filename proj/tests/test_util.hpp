#pragma once

#include <vector>

#include "doctest.h"

#include "hqf/errors.hpp"
#include "hqf/ring.hpp"

// Asserts that evaluating `expr` raises hqf_error with the given kind.
#define CHECK_RAISES(kind_, expr)                                          \
    do {                                                                   \
        bool caught_ = false;                                              \
        try {                                                              \
            (void)(expr);                                                  \
        } catch (const hqf::hqf_error& e_) {                               \
            caught_ = true;                                                \
            CHECK_MESSAGE(e_.kind() == hqf::errc::kind_, e_.what());       \
        }                                                                  \
        CHECK_MESSAGE(caught_, "expected " #kind_ " from " #expr);         \
    } while (0)

// The three documented ring presets.
inline std::vector<hqf::ring_ptr> test_presets() {
    return {hqf::RingSpec::preset_q2i(), hqf::RingSpec::preset_q2sqrt2(),
            hqf::RingSpec::preset_qp_sqrt_p(3)};
}

// Presets plus a couple of equal-characteristic rings of the same shape.
inline std::vector<hqf::ring_ptr> test_rings() {
    auto rs = test_presets();
    rs.push_back(hqf::RingSpec::make_polytrunc(9, 4, {0, 1}, {0, 1}));
    rs.push_back(hqf::RingSpec::make_polytrunc(2, 5, {}, {0, 1}));
    return rs;
}
