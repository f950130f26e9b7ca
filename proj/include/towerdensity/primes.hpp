#pragma once

#include <cstdint>
#include <vector>

#include "towerdensity/errors.hpp"

namespace towerdensity {

struct PrimeFactorization {
    struct Entry {
        std::uint64_t prime;
        std::uint32_t exponent;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries; // primes strictly increasing; empty iff n = 1

    std::uint64_t value() const;
    bool operator==(const PrimeFactorization&) const = default;
};

inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;
inline constexpr std::uint64_t kDefaultSieveLimit = 10'000'000;

// Smallest-prime-factor table on [2, limit], built with a linear sieve.
struct SpfTable {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> spf;    // spf[n] = least prime factor of n
    std::vector<std::uint32_t> primes; // all primes <= limit, increasing

    static SpfTable build(std::uint64_t limit);

    std::uint32_t smallest_factor(std::uint64_t n) const { return spf[n]; }
    PrimeFactorization factor(std::uint64_t n) const; // 1 <= n <= limit
};

// The k smallest primes, increasing.
std::vector<std::uint64_t> first_k_primes(std::size_t k);

// Deterministic for every 64-bit n.
bool is_prime(std::uint64_t n);

// Full 64-bit factorization: sieve lookups up to sieve_limit, above that
// deterministic Miller-Rabin plus Pollard-Brent splitting with a fixed
// restart sequence, so results are reproducible.
class Factorizer {
public:
    explicit Factorizer(std::uint64_t sieve_limit = kDefaultSieveLimit);

    PrimeFactorization factor(std::uint64_t n) const; // 1 <= n < 2^64
    const SpfTable& table() const { return table_; }

private:
    SpfTable table_;
};

// Shared default Factorizer (built lazily on first use).
PrimeFactorization factor(std::uint64_t n);

} // namespace towerdensity
