#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ergcap {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random source for the samplers. Bit-stable across platforms: the
/// engine is std::mt19937_64 (fully specified by the standard) and the
/// floating-point conversions are done here rather than through the
/// implementation-defined std:: distributions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for shard `index` of a run seeded with `seed`.
    static RandomStream for_shard(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(mix64(mix64(seed) ^ (index + 0x632be59bd9b4e019ULL)));
    }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-mean exponential.
    double exponential() { return -std::log(uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace ergcap
