#pragma once

#include <array>
#include <cstdint>

#include "hb/types.hpp"

namespace hb {

// Deterministic, platform-independent RNG stack. std::random distributions
// are implementation-defined, so everything here is spelled out explicitly.
//
// Stream derivation (documented contract for SeedSpec):
//   k      = splitmix64(master_seed).next()
//   key    = k XOR (0x9E3779B97F4A7C15 * (stream_index + 1))
//   state  = four successive outputs of splitmix64(key)
// Distinct (master_seed, stream_index) pairs give distinct keys for any
// fixed master, and distinct masters give unrelated key sequences.

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
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

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t stream_index);

/// Standard normal draws via Box-Muller on the explicit uniform generator.
class GaussianStream {
  public:
    explicit GaussianStream(const SeedSpec& seed)
        : rng_(derive_stream_key(seed.master_seed, seed.stream_index)) {}

    double next();

  private:
    Xoshiro256pp rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hb
