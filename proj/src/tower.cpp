#include "towerdensity/tower.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace towerdensity {

std::uint64_t TowerFactorization::value() const {
    std::uint64_t v = 1;
    for (const auto& f : factors) {
        std::uint64_t e = f.exponent.value();
        for (std::uint64_t i = 0; i < e; ++i) {
            if (v > UINT64_MAX / f.prime) throw std::logic_error("tower value overflows 64 bits");
            v *= f.prime;
        }
    }
    return v;
}

bool TowerFactorization::operator==(const TowerFactorization& other) const {
    return factors == other.factors;
}

TowerFactorization tower_factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("tower_factorize: n must be >= 1");
    TowerFactorization t;
    if (n == 1) return t;
    for (const auto& [p, e] : factor(n).entries) {
        TowerFactorization exp_tower;
        if (e > 1) exp_tower = tower_factorize(e);
        t.factors.push_back({p, std::move(exp_tower)});
    }
    return t;
}

void collect_tower_primes(const TowerFactorization& t, std::set<std::uint64_t>& out) {
    for (const auto& f : t.factors) {
        out.insert(f.prime);
        collect_tower_primes(f.exponent, out);
    }
}

std::set<std::uint64_t> tower_primes(std::uint64_t n) {
    std::set<std::uint64_t> out;
    collect_tower_primes(tower_factorize(n), out);
    return out;
}

std::string render_tower(const TowerFactorization& t) {
    if (t.is_one()) return "1";
    std::string out;
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
        if (i) out += '*';
        out += std::to_string(t.factors[i].prime);
        if (!t.factors[i].exponent.is_one()) {
            out += "^(";
            out += render_tower(t.factors[i].exponent);
            out += ')';
        }
    }
    return out;
}

MembershipTable::MembershipTable(std::uint64_t q, std::uint64_t cutoff) : q_(q), cutoff_(cutoff) {
    if (!is_prime(q)) throw std::invalid_argument("MembershipTable: q must be prime");
    if (cutoff < 1) throw std::invalid_argument("MembershipTable: cutoff must be >= 1");
    bits_.assign(cutoff + 1, false);
    if (cutoff < 2) return;
    SpfTable spf = SpfTable::build(cutoff);
    // exponents of m are < m, so ascending order sees them already decided
    for (std::uint64_t m = 2; m <= cutoff; ++m) {
        bool member = (m % q == 0);
        std::uint64_t n = m;
        while (!member && n > 1) {
            std::uint32_t p = spf.smallest_factor(n);
            std::uint32_t e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            member = bits_[e];
        }
        bits_[m] = member;
    }
}

bool MembershipTable::contains(std::uint64_t m) const {
    if (m <= cutoff_) return bits_[m];
    if (m % q_ == 0) return true;
    for (const auto& [p, e] : factor(m).entries) {
        if (p == q_ || contains(e)) return true;
    }
    return false;
}

namespace {

const MembershipTable& shared_table(std::uint64_t q) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<MembershipTable>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(q);
    if (it == tables.end()) {
        it = tables.emplace(q, std::make_unique<MembershipTable>(q, kMembershipCacheCutoff)).first;
    }
    return *it->second;
}

} // namespace

bool is_member(std::uint64_t n, std::uint64_t q) {
    if (!is_prime(q)) throw std::invalid_argument("is_member: q must be prime");
    return shared_table(q).contains(n);
}

std::vector<std::uint64_t> member_set(std::uint64_t q, std::uint64_t lo, std::uint64_t hi,
                                      bool complement) {
    if (!is_prime(q)) throw std::invalid_argument("member_set: q must be prime");
    if (lo > hi) throw std::invalid_argument("member_set: lo must be <= hi");
    if (hi > kMaxEnumerationLimit) {
        throw CapacityError("member_set: hi exceeds enumeration limit 1e6");
    }
    std::vector<std::uint64_t> out;
    if (hi <= kMembershipCacheCutoff) {
        const MembershipTable& t = shared_table(q);
        for (std::uint64_t m = lo; m <= hi; ++m) {
            if (t.contains(m) != complement) out.push_back(m);
        }
    } else {
        MembershipTable t(q, hi);
        for (std::uint64_t m = lo; m <= hi; ++m) {
            if (t.contains(m) != complement) out.push_back(m);
        }
    }
    return out;
}

} // namespace towerdensity
