#ifndef STREAMSAGE_RNG_HPP
#define STREAMSAGE_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "streamsage/error.hpp"

namespace streamsage {

namespace detail {
// splitmix64 finalizer; used to spread user seeds and derive child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace detail

// Deterministic random source. All draws go through explicit helpers so that
// the sequence depends only on the seed and the call order, never on the
// platform's distribution implementations. split() derives an independent
// child stream; the derivation itself is one draw on the parent.
class RngHandle {
public:
    explicit RngHandle(std::uint64_t seed) : gen_(detail::mix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ConfigError("below(): bound must be positive");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw ConfigError("uniform_int(): empty range");
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<std::int64_t>(below(span));
    }

    // Index drawn proportionally to the given non-negative weights, consuming
    // exactly one uniform01() draw. An all-zero weight vector falls back to a
    // uniform choice over indices.
    std::size_t weighted(const std::vector<std::uint64_t>& weights) {
        if (weights.empty()) throw ConfigError("weighted(): no weights");
        std::uint64_t total = 0;
        for (std::uint64_t w : weights) total += w;
        const double u = uniform01();
        if (total == 0) {
            std::size_t i = static_cast<std::size_t>(u * static_cast<double>(weights.size()));
            return i < weights.size() ? i : weights.size() - 1;
        }
        const double cut = u * static_cast<double>(total);
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += static_cast<double>(weights[i]);
            if (cut < acc) return i;
        }
        return weights.size() - 1;
    }

    // Independent child generator seeded from this stream.
    RngHandle split() { return RngHandle(detail::mix64(next_u64())); }

private:
    std::mt19937_64 gen_;
};

} // namespace streamsage

#endif
