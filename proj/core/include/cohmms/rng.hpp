#pragma once

#include <cstdint>
#include <random>

namespace cohmms {

/// splitmix64 mixer; used both as a stream-splitting hash and to whiten seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(seed ^ mix64(a ^ mix64(b)));
}

/// Deterministic uniform stream. mt19937_64's output sequence is pinned by
/// the standard; the double conversion below avoids the
/// implementation-defined std distributions so outputs are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 engine_;
};

} // namespace cohmms
