#pragma once

#include <cstdint>

namespace ppdsim {

/// Portable 64-bit generator with a fixed update rule, so every port of
/// the simulator reproduces sequences bit-exactly.
///
/// Seeding: the raw seed is passed once through the splitmix64 mixer
///   z  = seed + 0x9E3779B97F4A7C15
///   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
///   z ^= z >> 27;  z *= 0x94D049BB133111EB
///   z ^= z >> 31
/// (state falls back to 0x9E3779B97F4A7C15 if the mix yields zero).
///
/// Update (xorshift64*):
///   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
///   output = x * 0x2545F4914F6CDD1D
class Xorshift64Star {
  public:
    explicit Xorshift64Star(std::uint64_t seed) : state_(mix(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// True with probability p.
    bool bernoulli(double p) { return next_double() < p; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace ppdsim
