// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria marked "reported" print measurements without gating.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_util.hpp"
#include "towerdensity/bounds.hpp"
#include "towerdensity/cli.hpp"
#include "towerdensity/primes.hpp"
#include "towerdensity/reference_table.hpp"
#include "towerdensity/rigor.hpp"
#include "towerdensity/scan.hpp"
#include "towerdensity/tower.hpp"

using namespace towerdensity;
using u64 = std::uint64_t;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
}

void run_criterion(int id, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    report(id, name, pass, detail);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// shared significant digits of two aligned decimal strings like "0.0526..."
int matched_digits(const std::string& a, const std::string& b) {
    int n = 0;
    bool significant = false;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) break;
        if (a[i] >= '1' && a[i] <= '9') significant = true;
        if (significant && a[i] != '.') ++n;
    }
    return n;
}

int significant_digits_in(const std::string& s) {
    int n = 0;
    bool significant = false;
    for (char c : s) {
        if (c >= '1' && c <= '9') significant = true;
        if (significant && c != '.') ++n;
    }
    return n;
}

// digits of `value` agreeing with a reference decimal string, comparing
// truncations at the reference's own length
int digits_vs_reference(const DirectedDecimal& value, const std::string& reference) {
    int len = significant_digits_in(reference);
    return matched_digits(value.to_decimal_string(len, Rounding::Down), reference);
}

const ReferenceRow& reference_for(u64 q) {
    for (const ReferenceRow& row : reference_rows()) {
        if (row.q == q) return row;
    }
    throw std::logic_error("no reference row for q");
}

BoundParams reference_params(u64 q) {
    const ReferenceRow& row = reference_for(q);
    BoundParams p;
    p.q = q;
    p.num_primes = row.primes;
    p.s_cutoff = row.s_cutoff;
    p.a_cutoff = row.a_cutoff;
    p.precision = 128;
    return p;
}

const DensityInterval& reference_interval(u64 q) {
    static std::map<u64, DensityInterval> cache;
    auto it = cache.find(q);
    if (it == cache.end()) it = cache.emplace(q, best_interval(reference_params(q), 2)).first;
    return it->second;
}

mpq_class window_low(u64 q) {
    return oracle::frac(mpz_class(q) - 1, mpz_class(q) * oracle::zpow(2, q + 1)) -
           oracle::frac(1, oracle::zpow(q, q));
}

mpq_class window_high(u64 q) {
    return oracle::frac(mpz_class(q) + 1, mpz_class(q) * oracle::zpow(2, q));
}

bool inside_window(u64 q, const DensityInterval& interval, std::string& detail) {
    mpq_class inv_q(1, q);
    mpq_class lo_off = interval.lower.to_rational() - inv_q;
    mpq_class hi_off = interval.upper.to_rational() - inv_q;
    bool ok = window_low(q) <= lo_off && hi_off <= window_high(q);
    if (!ok) detail += " q=" + std::to_string(q) + " escapes the additive window;";
    return ok;
}

// independent membership walk by trial division (no sieve, no memo)
bool trial_contains(u64 n, u64 q) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            if (d == q) return true;
            u64 e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            if (trial_contains(e, q)) return true;
        }
    }
    return n == q;
}

bool criterion_1(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    ok &= render_tower(tower_factorize(1)) == "1";
    ok &= tower_primes(1).empty();
    ok &= render_tower(tower_factorize(144)) == "2^(2^(2))*3^(2)";
    ok &= tower_primes(144) == std::set<u64>{2, 3};
    ok &= render_tower(tower_factorize(625)) == "5^(2^(2))";
    ok &= tower_primes(625) == std::set<u64>{2, 5};
    ok &= render_tower(tower_factorize(33787663)) == "7*13^(2*3)";
    ok &= tower_primes(33787663) == std::set<u64>{2, 3, 7, 13};
    // row 5 componentwise: 37349 * 11^669921875
    ok &= factor(37349) == PrimeFactorization{{{13, 3}, {17, 1}}};
    ok &= factor(669921875) == PrimeFactorization{{{5, 9}, {7, 3}}};
    ok &= render_tower(tower_factorize(669921875)) == "5^(3^(2))*7^(3)";
    std::set<u64> row5 = tower_primes(37349);
    row5.insert(11);
    for (u64 p : tower_primes(669921875)) row5.insert(p);
    ok &= row5 == std::set<u64>{2, 3, 5, 7, 11, 13, 17};
    double dt = seconds_since(t0);
    ok &= dt < 1.0;
    detail = "all five rows reproduced in " + std::to_string(dt) + "s";
    return ok;
}

bool criterion_2(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    DensityInterval interval = best_interval(reference_params(2), 1); // single-threaded
    double dt = seconds_since(t0);
    const ReferenceRow& ref = reference_for(2);
    int lo_match = digits_vs_reference(interval.lower_S, ref.lower);
    int up_match = digits_vs_reference(interval.upper_A, ref.upper);
    int best_match = digits_vs_reference(interval.lower, ref.lower);
    std::ostringstream os;
    os << "S-route lower matches " << lo_match << "/" << significant_digits_in(ref.lower)
       << " reference digits, A-route upper " << up_match << "/"
       << significant_digits_in(ref.upper) << ", " << dt << "s; best lower (winner="
       << interval.winner_lower << ") is strictly tighter and matches only " << best_match
       << " digits — the reference lower comes from the plain-S inequality";
    detail = os.str();
    bool contained = interval.lower.to_rational() > oracle::mpq_from_decimal("0.577350376") &&
                     interval.upper.to_rational() < oracle::mpq_from_decimal("0.577350486");
    return lo_match >= 20 && up_match >= 20 && dt < 300.0 && contained &&
           dd_cmp(interval.lower, interval.upper) < 0;
}

bool criterion_3(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    DensityInterval d2 = asymptotic_interval(2, 60);
    double dt = seconds_since(t0);
    mpq_class tol(1, 1'000'000'000);
    mpq_class lo_err = abs(d2.lower.to_rational() - oracle::mpq_from_decimal("0.5246243585"));
    mpq_class hi_err = abs(d2.upper.to_rational() - oracle::mpq_from_decimal("0.5947152656"));
    detail = "lower " + d2.lower.to_decimal_string(12) + ", upper " +
             d2.upper.to_decimal_string(12) + ", " + std::to_string(dt) + "s";
    return lo_err <= tol && hi_err <= tol && dt < 1.0;
}

bool criterion_4(std::string& detail) {
    // gamma < 0.5772156649016 < 0.5773502691896 < 1/sqrt(3) < 0.5773502691897 < lower
    mpq_class below = oracle::frac(5773502691896, oracle::zpow(10, 13));
    mpq_class above = oracle::frac(5773502691897, oracle::zpow(10, 13));
    mpq_class third(1, 3);
    bool brackets_ok = below * below < third && above * above > third;
    mpq_class gamma_hi = oracle::frac(5772156649016, oracle::zpow(10, 13));
    const DensityInterval& d2 = reference_interval(2);
    bool sep = d2.lower.to_rational() > above && gamma_hi < below;
    detail = "certified lower " + d2.lower.to_decimal_string(14) +
             " > 1/sqrt(3) = 0.5773502691896... > gamma = 0.5772156649015...";
    return brackets_ok && sep;
}

bool criterion_5(std::string& detail) {
    const DensityInterval& interval = reference_interval(3);
    const ReferenceRow& ref = reference_for(3);
    int lo_match = digits_vs_reference(interval.lower_S, ref.lower);
    int up_match = digits_vs_reference(interval.upper_A, ref.upper);
    std::ostringstream os;
    os << "S-route lower matches " << lo_match << "/" << significant_digits_in(ref.lower)
       << ", A-route upper " << up_match << "/" << significant_digits_in(ref.upper)
       << " (cutoffs read as enumeration bounds, not set sizes)";
    detail = os.str();
    return lo_match >= 10 && up_match >= 10;
}

bool criterion_6(std::string& detail) {
    bool ok = true;
    for (u64 q : {5ull, 7ull, 11ull, 13ull, 47ull}) {
        ok &= inside_window(q, reference_interval(q), detail);
    }
    // the q=47 interval sits about 3.5e-15 above 1/47
    mpq_class off = reference_interval(47).lower.to_rational() - mpq_class(1, 47);
    bool off_ok = oracle::frac(34, oracle::zpow(10, 16)) < off &&
                  off < oracle::frac(36, oracle::zpow(10, 16));
    if (!off_ok) detail += " q=47 offset is not ~3.5e-15;";
    if (ok && off_ok) detail = "all intervals inside the additive window; q=47 offset ~3.5e-15";
    return ok && off_ok;
}

bool criterion_7(std::string& detail) {
    const DensityInterval& c41 = reference_interval(41);
    const DensityInterval& c43 = reference_interval(43);
    std::string w;
    bool windows = inside_window(41, c41, w) && inside_window(43, c43, w);

    const ReferenceRow& r19 = reference_for(19);
    const ReferenceRow& r41 = reference_for(41);
    const ReferenceRow& r43 = reference_for(43);
    bool dup = std::string(r41.lower) == r19.lower && std::string(r41.upper) == r19.upper;

    // the printed q=43 digits describe the q=41 interval
    mpq_class printed43 = oracle::mpq_from_decimal(r43.lower);
    mpq_class off43 = printed43 - mpq_class(1, 41);
    bool shifted = window_low(41) <= off43 && off43 <= window_high(41);
    int match43_vs_41 = digits_vs_reference(c41.lower_S, r43.lower);

    bool disagree = digits_vs_reference(c41.lower_S, r41.lower) < 5 &&
                    digits_vs_reference(c43.lower_S, r43.lower) < 5;

    // the q=7 reference digits correspond to a 5000-prime pool, not the
    // stated p=2500: at 5000 they reproduce in full
    BoundParams p7 = reference_params(7);
    p7.num_primes = 5000;
    DensityInterval c7 = best_interval(p7, 2);
    const ReferenceRow& r7 = reference_for(7);
    bool q7_at_5000 = digits_vs_reference(c7.lower_S, r7.lower) >= 45 &&
                      digits_vs_reference(c7.upper_A, r7.upper) >= 45;

    // the table command flags all three rows
    std::ostringstream out, err;
    int code = cli::run({"table", "--rows", "default", "--threads", "2"}, out, err);
    bool flagged7 = false, flagged41 = false, flagged43 = false;
    int ok_rows = 0;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("7 ", 0) == 0) flagged7 = line.find("FLAGGED") != std::string::npos;
        if (line.rfind("41 ", 0) == 0) flagged41 = line.find("FLAGGED") != std::string::npos;
        if (line.rfind("43 ", 0) == 0) flagged43 = line.find("FLAGGED") != std::string::npos;
        if (line.find(" ok") != std::string::npos) ++ok_rows;
    }
    std::ostringstream os;
    os << "computed q=41/q=43 sit inside their own windows; reference q=41 duplicates q=19; "
          "reference q=43 digits lie in the q=41 window (computed q=41 matches them to "
       << match43_vs_41 << " digits); q=7 digits reproduce in full at a 5000-prime pool; "
          "table flags all three rows, "
       << ok_rows << " other rows reproduce";
    detail = os.str();
    return windows && dup && shifted && disagree && q7_at_5000 && code == 0 && flagged7 &&
           flagged41 && flagged43 && match43_vs_41 >= 30 && ok_rows == 23;
}

bool criterion_8(std::string& detail) {
    std::vector<u64> qs{2, 3, 5, 7, 11, 13};
    bool ok = true;
    for (std::size_t i = 1; i < qs.size(); ++i) {
        const DensityInterval& prev = reference_interval(qs[i - 1]);
        const DensityInterval& cur = reference_interval(qs[i]);
        if (!(cur.upper.to_rational() < prev.lower.to_rational())) {
            ok = false;
            detail += " upper(" + std::to_string(qs[i]) + ") !< lower(" +
                      std::to_string(qs[i - 1]) + ");";
        }
    }
    if (ok) detail = "upper(q') < lower(q) for consecutive primes 2..13 at reference parameters";
    return ok;
}

bool criterion_9(std::string& detail) {
    // scan vs per-number brute force at every N <= 1e5
    for (u64 q : {2ull, 3ull, 5ull, 7ull}) {
        auto rows = density_scan(q, 100'000, CheckpointSchedule::every_k(1), 2);
        u64 count = 0;
        for (u64 n = 1; n <= 100'000; ++n) {
            count += trial_contains(n, q);
            if (rows[n - 1].count != count) {
                detail = "scan/brute mismatch at q=" + std::to_string(q) +
                         ", N=" + std::to_string(n);
                return false;
            }
        }
        if (brute_force_count(q, 100'000) != count) {
            detail = "brute_force_count mismatch at q=" + std::to_string(q);
            return false;
        }
    }

    // every bound equals its exact rational evaluation to 2 ulp at 40 digits
    for (u64 q : {2ull, 3ull}) {
        for (std::size_t pool : {0u, 4u, 11u}) {
            BoundParams p;
            p.q = q;
            p.num_primes = pool;
            p.s_cutoff = 12;
            p.a_cutoff = 12;
            p.precision = 40;
            p.zeta_terms = 10'000;
            std::vector<u64> P = bound_prime_set(p);
            std::vector<u64> S = member_set(q, 1, 12, false);
            std::vector<u64> A = member_set(q, 0, 12, true);
            ZetaEnclosure zq = zeta_enclosure_euler_maclaurin(q, p.zeta_terms, p.precision);
            ZetaEnclosure zq1 = zeta_enclosure_euler_maclaurin(q + 1, p.zeta_terms, p.precision);

            struct Case {
                DirectedDecimal got;
                mpq_class exact;
                bool is_lower;
            };
            std::vector<Case> cases{
                {bound_lower_S(p), oracle::lower_S(q, P, S), true},
                {bound_lower_B(p), oracle::lower_B(q, P, A, 12), true},
                {bound_upper_A(p), oracle::upper_A(q, P, A, zq.high.to_rational()), false},
                {bound_lower_zeta(p), oracle::lower_zeta(q, P, S, zq1.low.to_rational()), true},
            };
            for (const Case& c : cases) {
                mpq_class err = c.is_lower ? c.exact - c.got.to_rational()
                                           : c.got.to_rational() - c.exact;
                if (err < 0 || err > 2 * c.got.ulp()) {
                    detail = "bound/oracle mismatch at q=" + std::to_string(q) +
                             " pool=" + std::to_string(pool);
                    return false;
                }
            }
        }
    }
    detail = "scan == brute force for all N <= 1e5, q in {2,3,5,7}; "
             "all four bounds within 2 ulp of exact rational evaluation";
    return true;
}

bool criterion_10(std::string& detail) {
    bool ok = true;
    std::string why;

    // indicator multiplicativity on prime powers within the 64-bit domain
    for (u64 q : {2ull, 3ull, 5ull}) {
        for (u64 p = 2; p <= 100; ++p) {
            if (!is_prime(p)) continue;
            unsigned __int128 pn = 1;
            for (u64 n = 1; n <= 50; ++n) {
                pn *= p;
                if (pn > UINT64_MAX) break;
                bool lhs = !is_member(static_cast<u64>(pn), q);
                bool rhs = !is_member(n, q) && p != q;
                if (lhs != rhs) {
                    ok = false;
                    why += " multiplicativity;";
                }
            }
        }
    }

    // even inclusion / odd squarefree exclusion
    for (u64 n = 2; n <= 10'000; n += 2) {
        if (!is_member(n, 2)) {
            ok = false;
            why += " even-exclusion at " + std::to_string(n) + ";";
            break;
        }
    }
    for (u64 n = 3; n <= 10'000; n += 2) {
        bool squarefree = true;
        u64 m = n;
        for (u64 d = 2; d * d <= m; ++d) {
            u64 e = 0;
            while (m % d == 0) {
                m /= d;
                ++e;
            }
            if (e > 1) squarefree = false;
        }
        if (squarefree && is_member(n, 2)) {
            ok = false;
            why += " odd-squarefree at " + std::to_string(n) + ";";
            break;
        }
    }

    // direction soundness on random rationals
    std::mt19937_64 rng(991);
    std::uniform_int_distribution<long> nums(0, 1'000'000);
    std::uniform_int_distribution<long> dens(1, 1'000'000);
    for (int i = 0; i < 10'000; ++i) {
        long an = nums(rng), ad = dens(rng), bn = nums(rng), bd = dens(rng);
        mpq_class exact = mpq_class(an, ad) + mpq_class(bn, bd);
        exact.canonicalize();
        DirectedDecimal lo = dd_add(dd_from_rational(an, ad, 20, Rounding::Down),
                                    dd_from_rational(bn, bd, 20, Rounding::Down), Rounding::Down);
        DirectedDecimal hi = dd_add(dd_from_rational(an, ad, 20, Rounding::Up),
                                    dd_from_rational(bn, bd, 20, Rounding::Up), Rounding::Up);
        if (lo.to_rational() > exact || hi.to_rational() < exact) {
            ok = false;
            why += " direction-soundness;";
            break;
        }
    }

    // zeta enclosures contain pi^2/6 and zeta(3) (truncated literals)
    mpq_class z2 = oracle::mpq_from_decimal("1.64493406684822643647241516664602518921894990");
    mpq_class z3 = oracle::mpq_from_decimal("1.20205690315959428539973816151144999076498629");
    for (auto make : {zeta_enclosure, zeta_enclosure_euler_maclaurin}) {
        ZetaEnclosure e2 = make(2, 100'000, 40);
        ZetaEnclosure e3 = make(3, 100'000, 40);
        if (!(e2.low.to_rational() <= z2 && z2 <= e2.high.to_rational())) ok = false;
        if (!(e3.low.to_rational() <= z3 && z3 <= e3.high.to_rational())) ok = false;
    }

    // thread-count invariance, via the CLI so the bytes are compared
    auto run_text = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        cli::run(args, out, err);
        return out.str();
    };
    std::vector<std::string> bound_args{"bound", "--q", "2", "--primes", "2000", "--s-cutoff",
                                        "20", "--a-cutoff", "20", "--precision", "64"};
    auto with_threads = [&](std::vector<std::string> args, const char* t) {
        args.push_back("--threads");
        args.push_back(t);
        return run_text(args);
    };
    if (with_threads(bound_args, "1") != with_threads(bound_args, "4")) {
        ok = false;
        why += " bound thread determinism;";
    }
    std::vector<std::string> scan_args{"scan", "--q", "2", "--max", "3000000"};
    if (with_threads(scan_args, "1") != with_threads(scan_args, "3")) {
        ok = false;
        why += " scan thread determinism;";
    }

    detail = ok ? "multiplicativity, parity, squarefree-exclusion, direction soundness, "
                  "zeta containment, thread determinism all hold"
                : why;
    return ok;
}

bool criterion_11(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    auto rows = density_scan(2, 10'000'000, CheckpointSchedule::powers_of_ten(), 1);
    double dt = seconds_since(t0);
    const ScanCheckpoint& last = rows.back();
    mpq_class density(last.count, last.n);
    density.canonicalize();
    bool hard = dt < 60.0 && density >= mpq_class(1, 2) &&
                density <= oracle::mpq_from_decimal("0.595");
    mpq_class drift = abs(density - oracle::mpq_from_decimal("0.57735"));
    bool soft = drift <= oracle::mpq_from_decimal("0.003");
    std::ostringstream os;
    os << "density_scan(2, 1e7) = " << last.density << " in " << dt << "s (single-threaded); "
       << "soft check |density - 0.57735| <= 0.003 " << (soft ? "holds" : "FAILS (reported)");
    detail = os.str();
    return hard;
}

} // namespace

int main() {
    run_criterion(1, "tower factorization examples", criterion_1);
    run_criterion(2, "q=2 reference row to >= 20 digits", criterion_2);
    run_criterion(3, "closed-form interval for d(2)", criterion_3);
    run_criterion(4, "gamma < 1/sqrt(3) < d(2)", criterion_4);
    run_criterion(5, "q=3 reference row to >= 10 digits", criterion_5);
    run_criterion(6, "additive window around 1/q", criterion_6);
    run_criterion(7, "q=41/q=43 reference rows flagged as misprints", criterion_7);
    run_criterion(8, "d(q) strictly decreasing", criterion_8);
    run_criterion(9, "independent oracle agreement", criterion_9);
    run_criterion(10, "property suites", criterion_10);
    run_criterion(11, "scan performance and empirical density", criterion_11);

    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
