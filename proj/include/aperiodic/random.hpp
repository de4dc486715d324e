#pragma once

#include <cstdint>

namespace aperiodic {

/// Seed plus stream id. Draws are a pure function of (seed, stream, level, index),
/// so enlarging a sample extends earlier draws instead of reshuffling them.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend constexpr bool operator==(const RngSpec&, const RngSpec&) = default;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Counter-based generator built from chained SplitMix64 finalizers.
class CounterRng {
public:
    explicit constexpr CounterRng(RngSpec spec) noexcept
        : key_(detail::splitmix64(detail::splitmix64(spec.seed) ^ (spec.stream * 0xD1B54A32D192ED03ULL))) {}

    constexpr std::uint64_t bits(std::uint64_t level, std::uint64_t index) const noexcept {
        return detail::splitmix64(detail::splitmix64(key_ ^ (level * 0xC2B2AE3D27D4EB4FULL)) ^ index);
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t level, std::uint64_t index) const noexcept {
        return static_cast<double>(bits(level, index) >> 11) * 0x1p-53;
    }

private:
    std::uint64_t key_;
};

} // namespace aperiodic
