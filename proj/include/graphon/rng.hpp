#pragma once

#include <cstdint>

namespace graphon {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream key from a parent key and a label.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t label) noexcept {
    return mix64(mix64(seed) ^ mix64(label + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: output i of stream `key` is mix64(key + i * golden).
/// Streams are split by `split(label)`, so replicate r of a run uses
/// `Rng(seed).split(r)` regardless of scheduling.
class Rng {
public:
    explicit constexpr Rng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

    [[nodiscard]] constexpr Rng split(std::uint64_t label) const noexcept {
        Rng child(0);
        child.key_ = sub_seed(key_, label);
        return child;
    }

    constexpr std::uint64_t next_u64() noexcept {
        return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) by Lemire's multiply-shift (bias < 2^-64 * bound).
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * bound) >> 64);
    }

    constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace graphon
