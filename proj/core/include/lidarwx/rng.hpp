#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lidarwx {

/// Counter-free splitmix64 generator. Used everywhere instead of
/// <random> distributions so that streams are bit-identical across
/// standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1], safe as a log argument.
    double next_double_open() { return 1.0 - next_double(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    double exponential(double rate = 1.0) { return -std::log(next_double_open()) / rate; }

    /// Knuth's method; fine for the moderate means used here (< ~700).
    std::size_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double product = next_double_open();
        std::size_t count = 0;
        while (product > limit) {
            product *= next_double_open();
            ++count;
        }
        return count;
    }

  private:
    std::uint64_t state_;
};

/// Stable per-frame stream derivation: hash(master_seed, sequence, frame).
/// Frame-level parallelism therefore cannot reorder randomness.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view sequence,
                                        std::string_view frame) {
    std::uint64_t h = 1469598103934665603ull ^ master_seed;
    auto mix = [&h](std::string_view s) {
        for (const char c : s) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 1099511628211ull;
        }
        h ^= 0xFF;
        h *= 1099511628211ull;
    };
    mix(sequence);
    mix(frame);
    return h;
}

}  // namespace lidarwx
