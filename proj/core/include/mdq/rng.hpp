#pragma once

#include <cstdint>
#include <vector>

namespace mdq {

/// splitmix64 finalizer. Bijective mixing of a 64-bit value.
std::uint64_t mix64(std::uint64_t x);

/// Stream seed for item `index` under master seed `seed`.
///
/// Defined as mix64(seed + (index + 1) * 0x9e3779b97f4a7c15), i.e. the
/// splitmix64 output sequence starting at `seed`. Every consumer of
/// per-item randomness derives its seed through this function so that
/// generation order and thread count never matter.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256++ generator with hand-rolled uniform/gaussian draws.
///
/// The standard library distributions are implementation-defined; this
/// generator pins every byte of the random stream so that datasets and
/// training runs reproduce bit-exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; pairs are cached.
    double gaussian();

    /// Unbiased integer in [0, bound) by rejection sampling. bound > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Fisher-Yates shuffle using below(); deterministic across platforms.
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

} // namespace mdq
