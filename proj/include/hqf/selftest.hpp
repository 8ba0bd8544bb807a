#pragma once

#include <iosfwd>

namespace hqf {

// Runs the full acceptance suite twice and prints one PASS/FAIL line per
// criterion to `out`, followed by a RESULT line.  The report text is fully
// deterministic (counts but no timings; timing goes to stderr); the final
// criterion compares the two runs byte-for-byte and enforces the total time
// budget.  Returns 0 iff every criterion passed.
int run_selftest(std::ostream& out);

} // namespace hqf
