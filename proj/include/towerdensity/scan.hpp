#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "towerdensity/errors.hpp"

namespace towerdensity {

inline constexpr std::uint64_t kMaxScanLimit = 100'000'000;
inline constexpr std::uint64_t kMaxBruteForceLimit = 1'000'000;

struct ScanCheckpoint {
    std::uint64_t n = 0;     // segment end N
    std::uint64_t count = 0; // |M(q) in [1, N]|
    std::string density;     // count/n to 10 places, round half to even
    bool operator==(const ScanCheckpoint&) const = default;
};

struct CheckpointSchedule {
    enum class Kind { EveryK, PowersOfTen, Explicit };
    Kind kind = Kind::PowersOfTen;
    std::uint64_t every = 0;
    std::vector<std::uint64_t> points;

    static CheckpointSchedule every_k(std::uint64_t k);
    static CheckpointSchedule powers_of_ten();
    static CheckpointSchedule explicit_points(std::vector<std::uint64_t> pts);

    // "every:K" | "pow10" | comma-separated list
    static CheckpointSchedule parse(const std::string& text);

    // sorted unique checkpoints in [1, n_max], always ending with n_max
    std::vector<std::uint64_t> resolve(std::uint64_t n_max) const;
};

// count/n to 10 decimal places, round half to even
std::string format_density(std::uint64_t count, std::uint64_t n);

// Empirical density of M(q) over [1, n_max] via a segmented factorization
// sieve; n is a member iff q divides n or some exponent of n is a member.
// Segments may run in parallel; counts merge in segment order, so the output
// is identical for any thread count.
std::vector<ScanCheckpoint> density_scan(std::uint64_t q, std::uint64_t n_max,
                                         const CheckpointSchedule& schedule,
                                         unsigned threads = 1);

// Independent oracle: per-number tower construction by trial division, no
// shared sieve state.
std::uint64_t brute_force_count(std::uint64_t q, std::uint64_t n_max);

// header N,count,density; LF line endings
void write_checkpoint_csv(std::ostream& os, const std::vector<ScanCheckpoint>& checkpoints);

} // namespace towerdensity
