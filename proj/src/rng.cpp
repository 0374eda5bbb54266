#include "hb/rng.hpp"

#include <cmath>
#include <numbers>

namespace hb {

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t stream_index) {
    SplitMix64 sm(master_seed);
    const std::uint64_t k = sm.next();
    return k ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform01();
    const double u2 = rng_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

} // namespace hb
