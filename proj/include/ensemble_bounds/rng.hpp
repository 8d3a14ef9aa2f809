#pragma once

#include <cstdint>

namespace ensemble_bounds {

/// Counter-based random stream keyed by (seed, stream index).
///
/// Each Monte Carlo trial owns the stream with its trial index, so results
/// are bit-identical however trials are distributed over workers. Splitmix64
/// core; not suitable for cryptography.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                 mix(stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL)) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return mix(z);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return next_unit() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace ensemble_bounds
