#pragma once

#include <cstdint>
#include <cmath>

namespace ccb {

/// Splittable per-path random stream: the state is seeded by hashing
/// (seed, path_index), after which draws follow the splitmix64 sequence.
/// Identical (seed, path_index) always reproduces the identical stream, so
/// serial and parallel runs agree bit-exactly regardless of scheduling.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::int64_t path_index) {
        state_ = mix(seed ^ mix(static_cast<std::uint64_t>(path_index) + 0x632BE59BD9B4E019ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform draw on (0, 1]; never returns 0 so logs are safe.
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// One standard normal per call (Box-Muller, cosine branch), consuming a
    /// fixed two uniforms so stream positions stay strategy-independent.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_ = 0;
};

}  // namespace ccb
