#include "towerdensity/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace towerdensity {

namespace {

constexpr std::size_t kMaxPrimePool = 1'000'000;
constexpr std::size_t kProductChunk = 1024;

// intermediates carry guard digits; results round once at the end, so the
// published value sits within 2 ulp of the exact formula value
constexpr int kGuardDigits = 8;

DirectedDecimal dd_one(int precision) { return DirectedDecimal::exact_integer(1L, precision); }

mpz_class upow(std::uint64_t base, std::uint64_t exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return r;
}

// sum_{m in ms} p^(K - m), ms ascending, all <= K
mpz_class power_sum(std::uint64_t p, const std::vector<std::uint64_t>& ms, std::uint64_t K) {
    if (ms.empty()) return 0;
    mpz_class u = 0;
    std::uint64_t prev = ms.front();
    for (std::uint64_t m : ms) {
        if (m != prev) u *= upow(p, m - prev);
        u += 1;
        prev = m;
    }
    return u * upow(p, K - ms.back());
}

const ZetaEnclosure& cached_zeta(long s, long terms, int precision) {
    static std::mutex mu;
    static std::map<std::tuple<long, long, int>, ZetaEnclosure> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(s, terms, precision);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, zeta_enclosure_euler_maclaurin(s, terms, precision)).first;
    }
    return it->second;
}

struct Prepared {
    BoundParams params;
    std::vector<std::uint64_t> primes; // P
    std::vector<std::uint64_t> S;      // members of M(q) in [1, K_S]
    std::vector<std::uint64_t> A;      // non-members in [0, K_A]
    std::vector<std::uint64_t> Bc;     // non-members in [0, K_B]
    std::uint64_t K_B = 0;
};

Prepared prepare(const BoundParams& params) {
    if (!is_prime(params.q)) throw std::invalid_argument("bounds: q must be prime");
    if (params.precision < 8) throw std::invalid_argument("bounds: precision must be >= 8");
    if (params.s_cutoff < 1) throw std::invalid_argument("bounds: s_cutoff must be >= 1");
    if (params.zeta_terms < 2) throw std::invalid_argument("bounds: zeta_terms must be >= 2");
    if (params.num_primes > kMaxPrimePool) throw CapacityError("bounds: prime pool exceeds 1e6");
    std::uint64_t K_B = params.effective_b_cutoff();
    std::uint64_t max_cutoff = std::max({params.s_cutoff, params.a_cutoff, K_B});
    if (max_cutoff > kMaxEnumerationLimit) throw CapacityError("bounds: cutoff exceeds 1e6");

    Prepared prep;
    prep.params = params;
    prep.K_B = K_B;
    MembershipTable mt(params.q, std::max<std::uint64_t>(max_cutoff, 64));
    for (std::uint64_t m = 1; m <= params.s_cutoff; ++m) {
        if (mt.contains(m)) prep.S.push_back(m);
    }
    for (std::uint64_t m = 0; m <= params.a_cutoff; ++m) {
        if (!mt.contains(m)) prep.A.push_back(m);
    }
    for (std::uint64_t m = 0; m <= K_B; ++m) {
        if (!mt.contains(m)) prep.Bc.push_back(m);
    }
    for (std::uint64_t p : first_k_primes(params.num_primes)) {
        if (p != params.q) prep.primes.push_back(p);
    }
    return prep;
}

using FactorFn = std::function<void(std::size_t, mpz_class&, mpz_class&)>;

// Product of directed-rounded factors.  Factors are folded in index order
// within fixed 1024-wide chunks and chunks are folded in chunk order, so the
// grouping (and hence every rounded digit) is identical for any thread count.
DirectedDecimal directed_product(std::size_t count, Rounding dir, int precision, unsigned threads,
                                 const FactorFn& fn) {
    if (count == 0) return dd_one(precision);
    std::size_t nchunks = (count + kProductChunk - 1) / kProductChunk;
    std::vector<DirectedDecimal> partial(nchunks);
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work_chunk = [&](std::size_t c) {
        DirectedDecimal acc = dd_one(precision);
        mpz_class num, den;
        std::size_t hi = std::min(count, (c + 1) * kProductChunk);
        for (std::size_t i = c * kProductChunk; i < hi; ++i) {
            fn(i, num, den);
            acc = dd_mul(acc, dd_from_rational(num, den, precision, dir), dir);
        }
        partial[c] = std::move(acc);
    };

    unsigned workers = std::min<std::size_t>(threads, nchunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) work_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t c = next.fetch_add(1);
                    if (c >= nchunks) return;
                    try {
                        work_chunk(c);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mu);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    DirectedDecimal result = dd_one(precision);
    for (const auto& p : partial) result = dd_mul(result, p, dir);
    return result;
}

// bracket builders; all are exact rationals, rounded once per factor

// 1 - (1 - 1/p) sum_{s in S} p^-s  =  (p^(K+1) - (p-1) T) / p^(K+1)
void s_bracket(std::uint64_t p, const std::vector<std::uint64_t>& S, std::uint64_t K,
               mpz_class& num, mpz_class& den) {
    mpz_class t = power_sum(p, S, K);
    den = upow(p, K + 1);
    num = den - (p - 1) * t;
}

// (1 - 1/p) sum_{b in B} p^-b  =  ((p-1) T + 1) / p^(K+1),  B tail included
void b_bracket(std::uint64_t p, const std::vector<std::uint64_t>& Bc, std::uint64_t K,
               mpz_class& num, mpz_class& den) {
    mpz_class t = power_sum(p, Bc, K);
    num = (p - 1) * t + 1;
    den = upow(p, K + 1);
}

// (1 - 1/p)/(1 - p^-q) sum_{a in A} p^-a  =  (p-1) p^(q-1) T / ((p^q - 1) p^K)
void a_bracket(std::uint64_t p, std::uint64_t q, const std::vector<std::uint64_t>& A,
               std::uint64_t K, mpz_class& num, mpz_class& den) {
    mpz_class t = power_sum(p, A, K);
    num = (p - 1) * upow(p, q - 1) * t;
    den = (upow(p, q) - 1) * upow(p, K);
}

// [1 - (1 - 1/p) sum_{s in S} p^-s] / (1 - p^-(q+1))
void z_bracket(std::uint64_t p, std::uint64_t q, const std::vector<std::uint64_t>& S,
               std::uint64_t K, mpz_class& num, mpz_class& den) {
    mpz_class s_num, s_den;
    s_bracket(p, S, K, s_num, s_den);
    mpz_class pq1 = upow(p, q + 1);
    num = pq1 * s_num;
    den = s_den * (pq1 - 1);
}

DirectedDecimal lower_from(const Prepared& prep, unsigned threads, bool b_route) {
    const auto& pr = prep.params;
    const Rounding up = Rounding::Up;
    const int wp = pr.precision + kGuardDigits;
    DirectedDecimal coef = dd_from_rational(mpz_class(pr.q) - 1, mpz_class(pr.q), wp, up);
    FactorFn fn;
    if (b_route) {
        fn = [&](std::size_t i, mpz_class& num, mpz_class& den) {
            b_bracket(prep.primes[i], prep.Bc, prep.K_B, num, den);
        };
    } else {
        fn = [&](std::size_t i, mpz_class& num, mpz_class& den) {
            s_bracket(prep.primes[i], prep.S, pr.s_cutoff, num, den);
        };
    }
    DirectedDecimal prod = directed_product(prep.primes.size(), up, wp, threads, fn);
    DirectedDecimal x = dd_mul(coef, prod, up);
    return dd_sub(dd_one(wp), x, Rounding::Down).rounded(pr.precision);
}

DirectedDecimal upper_from(const Prepared& prep, unsigned threads) {
    const auto& pr = prep.params;
    const Rounding down = Rounding::Down;
    const int wp = pr.precision + kGuardDigits;
    mpz_class qq = upow(pr.q, pr.q);
    DirectedDecimal coef = dd_from_rational(qq - qq / pr.q, qq - 1, wp, down);
    const ZetaEnclosure& z = cached_zeta(static_cast<long>(pr.q), pr.zeta_terms, pr.precision);
    DirectedDecimal zeta_recip = dd_div(dd_one(wp), z.high, down);
    FactorFn fn = [&](std::size_t i, mpz_class& num, mpz_class& den) {
        a_bracket(prep.primes[i], pr.q, prep.A, pr.a_cutoff, num, den);
    };
    DirectedDecimal prod = directed_product(prep.primes.size(), down, wp, threads, fn);
    DirectedDecimal x = dd_mul(dd_mul(coef, zeta_recip, down), prod, down);
    return dd_sub(dd_one(wp), x, Rounding::Up).rounded(pr.precision);
}

DirectedDecimal lower_zeta_from(const Prepared& prep, unsigned threads) {
    const auto& pr = prep.params;
    if (pr.s_cutoff < pr.q) {
        throw std::invalid_argument("bound_lower_zeta: requires q in S (s_cutoff >= q)");
    }
    const Rounding up = Rounding::Up;
    const int wp = pr.precision + kGuardDigits;
    mpz_class qq1 = upow(pr.q, pr.q + 1);
    DirectedDecimal coef = dd_from_rational(qq1 - qq1 / pr.q, qq1 - 1, wp, up);
    const ZetaEnclosure& z = cached_zeta(static_cast<long>(pr.q) + 1, pr.zeta_terms, pr.precision);
    DirectedDecimal zeta_recip = dd_div(dd_one(wp), z.low, up);
    FactorFn fn = [&](std::size_t i, mpz_class& num, mpz_class& den) {
        z_bracket(prep.primes[i], pr.q, prep.S, pr.s_cutoff, num, den);
    };
    DirectedDecimal prod = directed_product(prep.primes.size(), up, wp, threads, fn);
    DirectedDecimal x = dd_mul(dd_mul(coef, zeta_recip, up), prod, up);
    return dd_sub(dd_one(wp), x, Rounding::Down).rounded(pr.precision);
}

} // namespace

DirectedDecimal factor_sum(std::uint64_t p, const std::vector<std::uint64_t>& exponents,
                           std::optional<std::uint64_t> tail_from, Rounding direction,
                           int precision) {
    if (p < 2) throw std::invalid_argument("factor_sum: p must be >= 2");
    std::vector<std::uint64_t> ms = exponents;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    if (!tail_from && ms.empty()) return dd_from_rational(0, 1, precision, direction);
    if (tail_from) {
        std::uint64_t K = *tail_from;
        if (!ms.empty() && ms.back() > K) {
            throw std::invalid_argument("factor_sum: tail_from below largest exponent");
        }
        // common denominator p^K (p-1)
        mpz_class num = (p - 1) * power_sum(p, ms, K) + 1;
        mpz_class den = upow(p, K) * (p - 1);
        return dd_from_rational(num, den, precision, direction);
    }
    mpz_class num = power_sum(p, ms, ms.back());
    mpz_class den = upow(p, ms.back());
    return dd_from_rational(num, den, precision, direction);
}

std::vector<std::uint64_t> bound_prime_set(const BoundParams& params) {
    return prepare(params).primes;
}

DirectedDecimal bound_lower_S(const BoundParams& params, unsigned threads) {
    return lower_from(prepare(params), threads, /*b_route=*/false);
}

DirectedDecimal bound_lower_B(const BoundParams& params, unsigned threads) {
    return lower_from(prepare(params), threads, /*b_route=*/true);
}

DirectedDecimal bound_upper_A(const BoundParams& params, unsigned threads) {
    return upper_from(prepare(params), threads);
}

DirectedDecimal bound_lower_zeta(const BoundParams& params, unsigned threads) {
    return lower_zeta_from(prepare(params), threads);
}

DensityInterval best_interval(const BoundParams& params, unsigned threads) {
    Prepared prep = prepare(params);
    DensityInterval out;
    out.q = params.q;
    out.params = params;
    out.lower_S = lower_from(prep, threads, false);
    out.lower_B = lower_from(prep, threads, true);
    out.upper_A = upper_from(prep, threads);
    if (params.s_cutoff >= params.q) out.lower_zeta = lower_zeta_from(prep, threads);

    out.lower = out.lower_S;
    out.winner_lower = "S";
    if (dd_cmp(out.lower_B, out.lower) > 0) {
        out.lower = out.lower_B;
        out.winner_lower = "B";
    }
    if (out.lower_zeta && dd_cmp(*out.lower_zeta, out.lower) > 0) {
        out.lower = *out.lower_zeta;
        out.winner_lower = "zeta";
    }
    out.upper = out.upper_A;
    out.winner_upper = "A";

    if (dd_cmp(out.lower, out.upper) > 0) {
        throw std::logic_error("best_interval: lower bound exceeds upper bound");
    }
    if (out.lower.sign() < 0 || dd_cmp(out.upper, dd_one(params.precision)) > 0) {
        throw std::logic_error("best_interval: interval escapes [0, 1]");
    }
    out.digits_agreed = shared_significant_digits(out.lower, out.upper, params.precision);
    return out;
}

DensityInterval asymptotic_interval(std::uint64_t q, int precision, long zeta_terms) {
    BoundParams params;
    params.q = q;
    params.num_primes = 0;
    params.s_cutoff = q; // puts q in S so the zeta-normalized lower applies
    params.a_cutoff = 1;
    params.b_cutoff = q;
    params.precision = precision;
    params.zeta_terms = zeta_terms;
    DensityInterval interval = best_interval(params, 1);

    // corollary window around 1/q, checked when 2^-q is resolvable
    bool resolvable = 0.30103 * static_cast<double>(q + 1) + 16.0 < static_cast<double>(precision);
    if (resolvable) {
        mpq_class inv_q(1, q);
        mpq_class w_lo = mpq_class(mpz_class(q) - 1, mpz_class(q) * upow(2, q + 1)) -
                         mpq_class(1, upow(q, q));
        mpq_class w_hi = mpq_class(mpz_class(q) + 1, mpz_class(q) * upow(2, q));
        w_lo.canonicalize();
        w_hi.canonicalize();
        mpq_class lo_off = interval.lower.to_rational() - inv_q;
        mpq_class hi_off = interval.upper.to_rational() - inv_q;
        if (lo_off < w_lo || hi_off > w_hi) {
            throw std::logic_error("asymptotic_interval: corollary window violated");
        }
    }
    return interval;
}

} // namespace towerdensity
