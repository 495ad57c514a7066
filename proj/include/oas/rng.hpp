#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "oas/error.hpp"

namespace oas {

/// Seeded random stream with hand-rolled draw routines so that sequences are
/// bit-identical for a given seed regardless of the standard library in use.
/// Every piece of randomness in the library flows through one of these,
/// injected by the caller; nothing draws from a global generator.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for trial `trial_index` of a run seeded with `master_seed`.
    /// Mixes the pair through splitmix64 so nearby seeds do not correlate.
    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
        return RandomStream(mix(mix(master_seed) ^ trial_index));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    int uniform_int(int bound) {
        if (bound <= 0) throw Error(ErrorCode::kInvalidArgument, "uniform_int: bound must be positive");
        const std::uint64_t b = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
        std::uint64_t r = engine_();
        while (r >= limit) r = engine_();
        return static_cast<int>(r % b);
    }

    /// Index drawn proportionally to `weights` (weights need not be normalized).
    int categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "categorical: weights sum to zero");
        const double u = uniform01() * total;
        double cum = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) last_positive = static_cast<int>(i);
            cum += weights[i];
            if (u < cum) return static_cast<int>(i);
        }
        return last_positive;  // u landed on accumulated rounding dust
    }

    /// Gaussian via Box-Muller. Consumes exactly two uniforms per call (no
    /// cached spare) so draw counts stay predictable.
    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace oas
