#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hqf {

// Every domain failure the library can raise.  CLI maps these to exit code 2
// with a machine-readable {"error":{"kind":...}} body; parse/usage problems
// are parse_error and map to exit code 1.
enum class errc {
    ring_mismatch,
    rank_mismatch,
    precision_mismatch,
    not_a_unit,
    constraint_violation,
    even_rank,
    not_divisible,
    insufficient_precision,
    bad_pairing,
    newton_divergence,
    degenerate,
    not_a_similitude_mod_i,
    not_primitive,
    support_overflow,
    non_unimodular_generator,
    zero_input,
    parse_error,
};

constexpr std::string_view errc_name(errc k) {
    switch (k) {
    case errc::ring_mismatch: return "RingMismatch";
    case errc::rank_mismatch: return "RankMismatch";
    case errc::precision_mismatch: return "PrecisionMismatch";
    case errc::not_a_unit: return "NotAUnit";
    case errc::constraint_violation: return "ConstraintViolation";
    case errc::even_rank: return "EvenRank";
    case errc::not_divisible: return "NotDivisible";
    case errc::insufficient_precision: return "InsufficientPrecision";
    case errc::bad_pairing: return "BadPairing";
    case errc::newton_divergence: return "NewtonDivergence";
    case errc::degenerate: return "Degenerate";
    case errc::not_a_similitude_mod_i: return "NotASimilitudeModI";
    case errc::not_primitive: return "NotPrimitive";
    case errc::support_overflow: return "SupportOverflow";
    case errc::non_unimodular_generator: return "NonUnimodularGenerator";
    case errc::zero_input: return "ZeroInput";
    case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

class hqf_error : public std::runtime_error {
public:
    hqf_error(errc kind, const std::string& detail)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + detail), kind_(kind),
          detail_(detail) {}

    errc kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    errc kind_;
    std::string detail_;
};

[[noreturn]] inline void raise(errc kind, const std::string& detail) {
    throw hqf_error(kind, detail);
}

} // namespace hqf
