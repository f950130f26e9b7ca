#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "towerdensity/primes.hpp"

namespace towerdensity {

// Recursive factorization in which every exponent > 1 is itself factored,
// until only primes and 1 remain.  The empty factor list is the tower of 1;
// exponent 1 is encoded as the empty tower.
struct TowerFactorization {
    struct Factor;
    std::vector<Factor> factors; // primes strictly increasing

    bool is_one() const { return factors.empty(); }
    std::uint64_t value() const;
    bool operator==(const TowerFactorization&) const;
};

struct TowerFactorization::Factor {
    std::uint64_t prime;
    TowerFactorization exponent;
    bool operator==(const Factor&) const = default;
};

TowerFactorization tower_factorize(std::uint64_t n); // 1 <= n < 2^64

// All primes appearing anywhere in the tower of n.
std::set<std::uint64_t> tower_primes(std::uint64_t n);
void collect_tower_primes(const TowerFactorization& t, std::set<std::uint64_t>& out);

// "1" for the empty tower; factors joined by "*"; "p" for exponent 1,
// "p^(R)" otherwise.  No whitespace.
std::string render_tower(const TowerFactorization& t);

// Characteristic bits of M(q) on {0, ..., cutoff}.  0 and 1 are never
// members; membership above the cutoff recurses through the exponents of
// the factorization (exponents of a 64-bit integer are <= 63).
class MembershipTable {
public:
    MembershipTable(std::uint64_t q, std::uint64_t cutoff);

    bool contains(std::uint64_t m) const;
    std::uint64_t q() const { return q_; }
    std::uint64_t cutoff() const { return cutoff_; }

private:
    std::uint64_t q_;
    std::uint64_t cutoff_;
    std::vector<bool> bits_;
};

inline constexpr std::uint64_t kMembershipCacheCutoff = 10'000;
inline constexpr std::uint64_t kMaxEnumerationLimit = 1'000'000;

// true iff n >= 2 and the tower of n contains q.  Backed by a shared
// per-q MembershipTable with cutoff 1e4.
bool is_member(std::uint64_t n, std::uint64_t q);

// Ascending members (or non-members, for complement=true) of M(q) in
// [lo, hi].  The complement follows the M^c(q) convention: 0 and 1 are
// non-members.
std::vector<std::uint64_t> member_set(std::uint64_t q, std::uint64_t lo, std::uint64_t hi,
                                      bool complement);

} // namespace towerdensity
