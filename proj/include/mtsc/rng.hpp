#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mtsc {

/// Deterministic random source. Wraps std::mt19937_64 (whose raw output
/// sequence is fixed by the standard) and derives doubles and bounded
/// integers by hand, so results are identical across platforms and standard
/// library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        // Rejection sampling over the top multiple of bound.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Sample k distinct values from [0, n) in sorted order.
    std::vector<std::int32_t> sample_without_replacement(std::int32_t n, std::int32_t k) {
        std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
        for (std::int32_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        // Partial Fisher-Yates: after k swaps the first k entries are the sample.
        for (std::int32_t i = 0; i < k; ++i) {
            std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        pool.resize(static_cast<std::size_t>(k));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

  private:
    std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Derives an independent sub-seed for (scale, window) work items, so that
/// per-snapshot detection is reproducible no matter how many threads run it
/// or in which order windows are processed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t scale, std::uint64_t window) {
    std::uint64_t h = detail::splitmix64(root);
    h = detail::splitmix64(h ^ scale);
    h = detail::splitmix64(h ^ window);
    return h;
}

}  // namespace mtsc
