#pragma once

#include <cstdint>
#include <vector>

namespace nlc {

// Deterministic random stream. A thin wrapper over a 64-bit xorshift-style
// generator (splitmix64 state advance) so that output is identical across
// platforms and standard library versions. Trial streams are derived from
// (master_seed, trial_index) and are independent of execution order.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(mix(seed + 0x9e3779b97f4a7c15ULL)) {}

    static Rng for_trial(uint64_t master_seed, uint64_t trial_index) {
        return Rng(mix(master_seed) + 0x9e3779b97f4a7c15ULL * (trial_index + 1));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; bound > 0.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Samples an index from a cumulative mass table (last entry ~ 1.0).
    size_t sample_cdf(const std::vector<double>& cdf) {
        double r = next_double();
        size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (r < cdf[mid]) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

  private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27; z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }
    uint64_t state_;
};

}  // namespace nlc
