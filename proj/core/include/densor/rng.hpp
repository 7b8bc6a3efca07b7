// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace densor::rng {

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) fully determined by (seed, key).
inline double uniform01(std::uint64_t seed, std::uint64_t key) {
    return static_cast<double>(mix(seed ^ mix(key)) >> 11) * 0x1.0p-53;
}

/// Deterministic Gaussian source: the stream index (e.g. a trial number)
/// plus the seed fully determine every draw, so trials are reproducible
/// under any parallel schedule. Box-Muller on splitmix64 output.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace densor::rng
