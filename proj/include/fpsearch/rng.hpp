#pragma once

// Seedable, splittable PRNG with platform-independent output.
// Core generator is splitmix64; per-stream instances are derived by mixing
// (seed, stream_index), so parallel consumers get independent sequences and
// results never depend on evaluation order.

#include <cmath>
#include <cstdint>

namespace fpsearch {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Prng {
  public:
    explicit Prng(std::uint64_t seed) : state_(seed) {
        // Warm up so that small seeds diverge immediately.
        splitmix64_next(state_);
    }

    // Independent stream for e.g. one Monte-Carlo trajectory.
    static Prng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64_next(s) ^ (index * 0xd1b54a32d192ed03ULL);
        return Prng(mixed);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; second sample of each pair is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fpsearch
