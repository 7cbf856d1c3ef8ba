#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace netinfer {

/// SplitMix64 scramble step; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator. The algorithm is fully specified, so sequences are
/// reproducible across platforms and languages for a given (seed, stream).
///
/// Stream splitting: substream `i` of seed `s` is seeded from SplitMix64 run
/// on s after folding in i. Distinct streams are statistically independent;
/// chain i of a simulation always uses substream i regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed;
        (void)splitmix64(sm);
        sm ^= stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by bitmask rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            std::uint64_t r = next() & mask;
            if (r < bound) return r;
        }
    }

    /// Sample an index from a cumulative distribution (cdf.back() ~ 1).
    std::size_t categorical_cdf(std::span<const double> cdf) {
        double u = uniform();
        std::size_t lo = 0, hi = cdf.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (u < cdf[mid])
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo < cdf.size() ? lo : cdf.size() - 1;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace netinfer
