#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace towerdensity {

// Published 35+-digit reference bounds for d(q), together with the
// parameters they were computed at.  Two rows carry known misprints (the
// q=41 digits repeat the q=19 row; the q=43 digits actually belong to the
// q=41 interval) and are annotated so the table command can flag them.
struct ReferenceRow {
    std::uint64_t q;
    std::size_t primes;       // prime pool (q is dropped from it)
    std::uint64_t a_cutoff;
    std::uint64_t s_cutoff;
    const char* lower;        // published lower bound digits
    const char* upper;        // published upper bound digits
    const char* note;         // nullptr, or the known misprint
};

std::span<const ReferenceRow> reference_rows();

// nullptr when (q, primes, a, s) matches no reference row
const ReferenceRow* find_reference_row(std::uint64_t q, std::size_t primes,
                                       std::uint64_t a_cutoff, std::uint64_t s_cutoff);

} // namespace towerdensity
