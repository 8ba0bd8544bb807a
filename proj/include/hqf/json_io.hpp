#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "hqf/cochar.hpp"
#include "hqf/errors.hpp"
#include "hqf/herm.hpp"
#include "hqf/reduce.hpp"
#include "hqf/series.hpp"

namespace hqf {

using json = nlohmann::json;

// Wire conventions, applied strictly in both directions:
//   * every top-level document carries "v": 1;
//   * unknown fields are rejected (exactness culture: silent coercion hides
//     mathematical errors);
//   * zmod scalars are emitted as decimal strings and accepted as integers or
//     strings; polytrunc scalars are little-endian coefficient arrays of the
//     full precision, accepted at any length up to it (or a bare integer for
//     constants);
//   * series coefficients are lists of [field element as integer string,
//     exponent as rational string "num/den" in t-units].
// All failures raise parse_error.

json parse_document(const std::string& text);
void require_v1(const json& j);
// Field check: everything in `required` present, nothing outside
// required+optional present, j an object.
void require_fields(const json& j, const char* what,
                    std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {});

ring_ptr ring_from_json(const json& j);
json ring_to_json(const RingSpec& r);

Scalar scalar_from_json(const RingSpec& r, const json& j);
json scalar_to_json(const RingSpec& r, const Scalar& s);

QElt qelt_from_json(const RingSpec& r, const json& j);
json qelt_to_json(const RingSpec& r, const QElt& x);

// Form object {ring, n, A, B} (no version field: that belongs to documents).
HermForm form_from_json(const json& j);
json form_to_json(const HermForm& f);

// Similitude object {gamma1, gamma2}; gamma1 row-major nested arrays of
// {a, b} objects.
Similitude similitude_from_json(const RingSpec& r, unsigned n, const json& j);
json similitude_to_json(const RingSpec& r, const Similitude& s);

// Series document body {q, p, maxden, prec, coeffs}.
TeichSeries series_from_json(const json& j, unsigned sbound = 512);
json series_to_json(const TeichSeries& a);
MonoElt monoelt_from_json(const OCModel& M, const json& j);
json monoelt_to_json(const OCModel& M, const MonoElt& e);
json pipoly_to_json(const OCModel& M, const PiPoly& p);
std::string frac_to_string(const Frac& f);

// Action object {rank, generators}, generators a list of row-major matrices
// given as lists of rows.
LatticeAction action_from_json(const json& j);
json action_to_json(const LatticeAction& a);
json sp_to_json(const SpClass& c);

json error_to_json(const hqf_error& e);

} // namespace hqf
