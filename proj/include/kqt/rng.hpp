#pragma once

#include <cstdint>

namespace kqt {

// Algorithm identifier embedded in every randomized report.
inline constexpr const char* kPrngId = "splitmix64";

// splitmix64 finalizer (Steele/Lea/Flood mixing function).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-instance seed derivation: master XOR mix64(index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return master ^ mix64(index);
}

// splitmix64: 64-bit state advanced by the golden gamma, output finalized by mix64.
// Deterministic across platforms; bound and unit-interval draws are defined below
// so that streams never depend on library implementation details.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, bound) via 128-bit multiply-shift. bound == 0 yields 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

private:
    std::uint64_t state_;
};

}  // namespace kqt
