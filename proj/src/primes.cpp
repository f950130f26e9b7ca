#include "towerdensity/primes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace towerdensity {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

std::uint64_t PrimeFactorization::value() const {
    u64 v = 1;
    for (const auto& [p, e] : entries) {
        for (std::uint32_t i = 0; i < e; ++i) v *= p;
    }
    return v;
}

SpfTable SpfTable::build(std::uint64_t limit) {
    if (limit < 2 || limit > kMaxSieveLimit) {
        throw CapacityError("sieve limit must be in [2, 1e8], got " + std::to_string(limit));
    }
    SpfTable t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    // linear sieve: each composite is crossed off exactly once, by its spf
    for (u64 i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = static_cast<std::uint32_t>(i);
            t.primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : t.primes) {
            if (p > t.spf[i] || i * p > limit) break;
            t.spf[i * p] = p;
        }
    }
    return t;
}

PrimeFactorization SpfTable::factor(std::uint64_t n) const {
    PrimeFactorization f;
    while (n > 1) {
        std::uint32_t p = spf[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.entries.push_back({p, e});
    }
    return f;
}

std::vector<std::uint64_t> first_k_primes(std::size_t k) {
    std::vector<u64> out;
    if (k == 0) return out;
    out.reserve(k);
    // p_k < k(ln k + ln ln k) for k >= 6
    double kd = static_cast<double>(std::max<std::size_t>(k, 6));
    u64 bound = static_cast<u64>(kd * (std::log(kd) + std::log(std::log(kd)))) + 16;
    for (;;) {
        std::vector<bool> comp(bound + 1, false);
        for (u64 i = 2; i * i <= bound; ++i) {
            if (!comp[i]) {
                for (u64 j = i * i; j <= bound; j += i) comp[j] = true;
            }
        }
        out.clear();
        for (u64 i = 2; i <= bound && out.size() < k; ++i) {
            if (!comp[i]) out.push_back(i);
        }
        if (out.size() == k) return out;
        bound *= 2;
    }
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Bases proving primality for all n < 3.3e24 (covers the full 64-bit range).
constexpr std::array<u64, 12> kMrBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 p : kMrBases) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : kMrBases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace {

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's cycle variant of Pollard rho; returns a nontrivial factor or n.
u64 pollard_brent(u64 n, u64 c, u64 x0) {
    auto step = [n, c](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 y = x0, r = 1, q = 1, g = 1, x = 0, ys = 0;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = step(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            u64 m = std::min<u64>(128, r - k);
            for (u64 i = 0; i < m; ++i) {
                y = step(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r <<= 1;
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

// n composite, odd, no factor <= 65536.
u64 split(u64 n) {
    // fixed restart sequence keeps factorizations reproducible
    for (u64 c = 1;; ++c) {
        u64 g = pollard_brent(n, c, 2 + c);
        if (g != n && g != 1) return g;
    }
}

void factor_big(u64 n, std::map<u64, std::uint32_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    u64 g = split(n);
    factor_big(g, out);
    factor_big(n / g, out);
}

} // namespace

Factorizer::Factorizer(std::uint64_t sieve_limit) : table_(SpfTable::build(sieve_limit)) {}

PrimeFactorization Factorizer::factor(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("factor: n must be >= 1");
    if (n <= table_.limit) return table_.factor(n);

    PrimeFactorization f;
    for (std::uint32_t p : table_.primes) {
        if (p > 65536 || static_cast<u64>(p) * p > n) break;
        if (n % p == 0) {
            std::uint32_t e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.entries.push_back({p, e});
            if (n <= table_.limit) {
                auto rest = table_.factor(n);
                f.entries.insert(f.entries.end(), rest.entries.begin(), rest.entries.end());
                return f;
            }
        }
    }
    if (n > 1) {
        std::map<u64, std::uint32_t> big;
        factor_big(n, big);
        for (const auto& [p, e] : big) f.entries.push_back({p, e});
    }
    return f;
}

PrimeFactorization factor(std::uint64_t n) {
    static const Factorizer shared;
    return shared.factor(n);
}

} // namespace towerdensity
