#pragma once
// Seedable random source shared by every generator.  All draws go through
// hand-rolled transforms (not std distributions) so that a given
// (seed, call sequence) reproduces bit-for-bit on any conforming stdlib.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace lrd {

// SplitMix64 step; used only for seed expansion and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {
        std::uint64_t s = seed;
        engine_.seed(splitmix64(s));
    }

    std::uint64_t seed() const { return seed_; }

    // Independent generator for a parallel worker / repeated run.  Stream k
    // of seed s is RandomSource(splitmix(s ^ golden*k)); streams never share
    // engine state with the parent or with each other.
    RandomSource stream(std::uint64_t stream_id) const {
        std::uint64_t s = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
        return RandomSource(splitmix64(s));
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); safe as a log() argument.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Standard normal via Box-Muller with the second value cached.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Trials-to-first-success count: P(G > m) = (1-p)^m, support {1,2,...}.
// Values beyond `cap` are clamped (callers truncate runs at the series end,
// and p can underflow to 0 for very deep chain states).
inline std::int64_t sample_geometric(RandomSource& rng, double p, std::int64_t cap) {
    if (p >= 1.0) return 1;
    const double lq = std::log1p(-p);  // log(1-p), stable for tiny p
    if (!(lq < 0.0)) return cap;       // p underflowed to 0
    const double g = std::floor(std::log(rng.uniform_open()) / lq) + 1.0;
    if (!(g < static_cast<double>(cap))) return cap;
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(g));
}

}  // namespace lrd
