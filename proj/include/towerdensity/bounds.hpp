#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "towerdensity/rigor.hpp"
#include "towerdensity/tower.hpp"

namespace towerdensity {

// Truncation parameters for the certified bounds on d(q).
//
// The prime set P is the first `num_primes` primes with q removed (q is not
// replaced, so |P| = num_primes - 1 whenever q is among them; this is the
// convention the reference tables were computed with).
struct BoundParams {
    std::uint64_t q = 2;
    std::size_t num_primes = 0;
    std::uint64_t s_cutoff = 20;                // S  = M(q)   in [1, s_cutoff]
    std::uint64_t a_cutoff = 20;                // A  = M^c(q) in [0, a_cutoff]
    std::optional<std::uint64_t> b_cutoff;      // B  = (M^c(q) in [0, K_B]) + full tail above K_B;
                                                // defaults to s_cutoff
    int precision = 128;
    long zeta_terms = 100'000;

    std::uint64_t effective_b_cutoff() const { return b_cutoff.value_or(s_cutoff); }
};

// Certified enclosure of d(q) plus everything that produced it.
struct DensityInterval {
    std::uint64_t q = 2;
    DirectedDecimal lower; // direction Down
    DirectedDecimal upper; // direction Up
    BoundParams params;
    int digits_agreed = 0;
    std::string winner_lower; // "S", "B" or "zeta"
    std::string winner_upper; // "A"

    // the individual inequalities behind lower/upper
    DirectedDecimal lower_S;
    DirectedDecimal lower_B;
    std::optional<DirectedDecimal> lower_zeta; // present when q <= s_cutoff
    DirectedDecimal upper_A;
};

// Directed value of sum_{m in exponents} p^-m; tail_from = K appends the
// exact geometric tail sum_{m > K} p^-m = 1/(p^K (p-1)).
DirectedDecimal factor_sum(std::uint64_t p, const std::vector<std::uint64_t>& exponents,
                           std::optional<std::uint64_t> tail_from, Rounding direction,
                           int precision);

// The prime set the bounds run over: first num_primes primes, q removed.
std::vector<std::uint64_t> bound_prime_set(const BoundParams& params);

// d(q) >= 1 - (1 - 1/q) prod_{p in P} [1 - (1 - 1/p) sum_{s in S} p^-s]
DirectedDecimal bound_lower_S(const BoundParams& params, unsigned threads = 1);

// d(q) >= 1 - (1 - 1/q) prod_{p in P} [(1 - 1/p) sum_{b in B} p^-b]
// (identical to bound_lower_S when b_cutoff == s_cutoff)
DirectedDecimal bound_lower_B(const BoundParams& params, unsigned threads = 1);

// d(q) <= 1 - (q^q - q^(q-1))/(q^q - 1) * 1/zeta(q)
//            * prod_{p in P} [(1 - 1/p)/(1 - p^-q) sum_{a in A} p^-a]
DirectedDecimal bound_upper_A(const BoundParams& params, unsigned threads = 1);

// Requires q in S.
// d(q) >= 1 - (q^(q+1) - q^q)/(q^(q+1) - 1) * 1/zeta(q+1)
//            * prod_{p in P} [(1 - (1 - 1/p) sum_{s in S} p^-s)/(1 - p^-(q+1))]
DirectedDecimal bound_lower_zeta(const BoundParams& params, unsigned threads = 1);

// P = empty set specializations of the zeta-normalized lower and the A upper;
// also cross-checks the additive corollary window
//   (1 - 1/q)/2^(q+1) - q^-q  <=  d(q) - 1/q  <=  (1 + 1/q)/2^q
// whenever it is resolvable at the working precision.
DensityInterval asymptotic_interval(std::uint64_t q, int precision = 128,
                                    long zeta_terms = 100'000);

// All applicable inequalities combined: lower = max, upper = min; records
// which inequality won each side.
DensityInterval best_interval(const BoundParams& params, unsigned threads = 1);

} // namespace towerdensity
