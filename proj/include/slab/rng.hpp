#pragma once

#include <cstdint>

namespace slab {

/// Counter-based deterministic generator (SplitMix64 of seed xor counter).
/// Stateless: value(i) depends only on (seed, i), so sweeps and reruns are
/// reproducible regardless of evaluation order.  The exact mixing function
/// is documented in the README for cross-implementation matching.
struct CounterRng {
    std::uint64_t seed = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        const std::uint64_t z = mix(seed * 0x2545f4914f6cdd1dULL + counter);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

    /// Uniform in [-1, 1).
    double symmetric(std::uint64_t counter) const { return 2.0 * uniform(counter) - 1.0; }
};

} // namespace slab
