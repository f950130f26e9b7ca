#include "towerdensity/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "towerdensity/primes.hpp"
#include "towerdensity/tower.hpp"

namespace towerdensity {

namespace {

constexpr std::uint64_t kSegmentLength = 1u << 20;

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return primes;
}

} // namespace

CheckpointSchedule CheckpointSchedule::every_k(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("checkpoint stride must be >= 1");
    CheckpointSchedule s;
    s.kind = Kind::EveryK;
    s.every = k;
    return s;
}

CheckpointSchedule CheckpointSchedule::powers_of_ten() {
    return CheckpointSchedule{};
}

CheckpointSchedule CheckpointSchedule::explicit_points(std::vector<std::uint64_t> pts) {
    CheckpointSchedule s;
    s.kind = Kind::Explicit;
    s.points = std::move(pts);
    return s;
}

namespace {

std::uint64_t parse_u64(const std::string& item, const std::string& context) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad checkpoint spec: " + context);
    }
}

} // namespace

CheckpointSchedule CheckpointSchedule::parse(const std::string& text) {
    if (text == "pow10") return powers_of_ten();
    if (text.rfind("every:", 0) == 0) {
        return every_k(parse_u64(text.substr(6), text));
    }
    std::vector<std::uint64_t> pts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (item.empty()) throw std::invalid_argument("bad checkpoint spec: " + text);
        pts.push_back(parse_u64(item, text));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return explicit_points(std::move(pts));
}

std::vector<std::uint64_t> CheckpointSchedule::resolve(std::uint64_t n_max) const {
    std::vector<std::uint64_t> pts;
    switch (kind) {
    case Kind::EveryK:
        for (std::uint64_t n = every; n <= n_max; n += every) pts.push_back(n);
        break;
    case Kind::PowersOfTen:
        for (std::uint64_t n = 10; n <= n_max; n *= 10) pts.push_back(n);
        break;
    case Kind::Explicit:
        for (std::uint64_t n : points) {
            if (n < 1 || n > n_max) {
                throw std::invalid_argument("checkpoint outside [1, n_max]: " + std::to_string(n));
            }
            pts.push_back(n);
        }
        break;
    }
    pts.push_back(n_max);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::string format_density(std::uint64_t count, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("format_density: n must be >= 1");
    unsigned __int128 scaled = static_cast<unsigned __int128>(count) * 10'000'000'000ull;
    std::uint64_t q = static_cast<std::uint64_t>(scaled / n);
    std::uint64_t r = static_cast<std::uint64_t>(scaled % n);
    unsigned __int128 twice = static_cast<unsigned __int128>(r) * 2;
    if (twice > n || (twice == n && (q & 1))) ++q;
    std::string frac = std::to_string(q % 10'000'000'000ull);
    frac.insert(frac.begin(), 10 - frac.size(), '0');
    return std::to_string(q / 10'000'000'000ull) + "." + frac;
}

namespace {

struct SegmentResult {
    std::uint64_t total = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> checkpoint_counts; // (n, count in [lo, n])
};

// members of M(q) in [lo, hi]: flag multiples of q, factor everything else
// with the base primes and look the exponents up in the membership bits
SegmentResult scan_segment(std::uint64_t q, std::uint64_t lo, std::uint64_t hi,
                           const std::vector<std::uint32_t>& base_primes,
                           const MembershipTable& exponents,
                           const std::vector<std::uint64_t>& checkpoints) {
    std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::uint32_t> residual(len);
    std::vector<char> member(len, 0);
    for (std::size_t i = 0; i < len; ++i) residual[i] = static_cast<std::uint32_t>(lo + i);

    for (std::uint32_t p : base_primes) {
        std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp > hi) break;
        std::uint64_t first = ((lo + p - 1) / p) * p;
        for (std::uint64_t m = first; m <= hi; m += p) {
            std::size_t i = static_cast<std::size_t>(m - lo);
            std::uint32_t e = 0;
            while (residual[i] % p == 0) {
                residual[i] /= p;
                ++e;
            }
            if (p == q || exponents.contains(e)) member[i] = 1;
        }
    }
    // leftover residual > 1 is a prime factor with exponent 1; only q matters
    SegmentResult result;
    auto cp = std::lower_bound(checkpoints.begin(), checkpoints.end(), lo);
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (!member[i] && residual[i] == q && lo + i >= 2) member[i] = 1;
        running += member[i];
        if (cp != checkpoints.end() && *cp == lo + i) {
            result.checkpoint_counts.emplace_back(*cp, running);
            ++cp;
        }
    }
    result.total = running;
    return result;
}

} // namespace

std::vector<ScanCheckpoint> density_scan(std::uint64_t q, std::uint64_t n_max,
                                         const CheckpointSchedule& schedule, unsigned threads) {
    if (!is_prime(q)) throw std::invalid_argument("density_scan: q must be prime");
    if (n_max < 1) throw std::invalid_argument("density_scan: n_max must be >= 1");
    if (n_max > kMaxScanLimit) throw CapacityError("density_scan: n_max exceeds 1e8");

    std::vector<std::uint64_t> checkpoints = schedule.resolve(n_max);
    // exponents of any n < 2^64 are <= 63
    MembershipTable exponents(q, std::max<std::uint64_t>(q, 64));
    std::uint64_t sqrt_n = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n_max)));
    while ((sqrt_n + 1) * (sqrt_n + 1) <= n_max) ++sqrt_n;
    std::vector<std::uint32_t> base_primes = primes_up_to(sqrt_n);

    std::size_t nsegments = static_cast<std::size_t>((n_max + kSegmentLength - 1) / kSegmentLength);
    std::vector<SegmentResult> results(nsegments);

    auto work = [&](std::size_t s) {
        std::uint64_t lo = s * kSegmentLength + 1;
        std::uint64_t hi = std::min<std::uint64_t>(n_max, (s + 1) * kSegmentLength);
        results[s] = scan_segment(q, lo, hi, base_primes, exponents, checkpoints);
    };

    unsigned workers = std::min<std::size_t>(threads, nsegments);
    if (workers <= 1) {
        for (std::size_t s = 0; s < nsegments; ++s) work(s);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t s = next.fetch_add(1);
                    if (s >= nsegments) return;
                    try {
                        work(s);
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

    std::vector<ScanCheckpoint> out;
    out.reserve(checkpoints.size());
    std::uint64_t before = 0;
    for (const auto& seg : results) {
        for (const auto& [n, cnt] : seg.checkpoint_counts) {
            out.push_back({n, before + cnt, format_density(before + cnt, n)});
        }
        before += seg.total;
    }
    return out;
}

std::uint64_t brute_force_count(std::uint64_t q, std::uint64_t n_max) {
    if (!is_prime(q)) throw std::invalid_argument("brute_force_count: q must be prime");
    if (n_max > kMaxBruteForceLimit) throw CapacityError("brute_force_count: n_max exceeds 1e6");

    // self-contained trial-division tower walk
    std::function<bool(std::uint64_t)> contains_q = [&](std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                if (d == q) return true;
                std::uint64_t e = 0;
                while (n % d == 0) {
                    n /= d;
                    ++e;
                }
                if (contains_q(e)) return true;
            }
        }
        return n == q; // leftover prime factor, exponent 1
    };

    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        if (contains_q(n)) ++count;
    }
    return count;
}

void write_checkpoint_csv(std::ostream& os, const std::vector<ScanCheckpoint>& checkpoints) {
    os << "N,count,density\n";
    for (const auto& c : checkpoints) {
        os << c.n << ',' << c.count << ',' << c.density << '\n';
    }
}

} // namespace towerdensity
