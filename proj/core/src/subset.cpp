#include "streamsage/subset.hpp"

#include <bit>
#include <numeric>

namespace streamsage {

FeatureSubset::FeatureSubset(int d) : d_(d) {
    if (d < 1 || d > 63) throw ConfigError("subset dimension must be in [1, 63]");
}

FeatureSubset FeatureSubset::full(int d) {
    FeatureSubset s(d);
    s.bits_ = s.full_mask();
    return s;
}

FeatureSubset FeatureSubset::from_bits(int d, std::uint64_t bits) {
    FeatureSubset s(d);
    if (bits & ~s.full_mask()) throw ConfigError("subset bits outside dimension");
    s.bits_ = bits;
    return s;
}

int FeatureSubset::count() const { return std::popcount(bits_); }

std::vector<int> FeatureSubset::members() const {
    std::vector<int> out;
    for (int i = 0; i < d_; ++i)
        if ((bits_ >> i) & 1u) out.push_back(i);
    return out;
}

std::vector<int> FeatureSubset::complement_members() const {
    std::vector<int> out;
    for (int i = 0; i < d_; ++i)
        if (!((bits_ >> i) & 1u)) out.push_back(i);
    return out;
}

Permutation sample_permutation(int d, RngHandle& rng) {
    if (d < 1) throw ConfigError("permutation dimension must be positive");
    Permutation pi(static_cast<std::size_t>(d));
    std::iota(pi.begin(), pi.end(), 0);
    // Fisher-Yates; draw order fixed so identical seeds give identical orders.
    for (int i = d - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(pi[static_cast<std::size_t>(i)], pi[j]);
    }
    return pi;
}

std::pair<FeatureSubset, FeatureSubset> preceding_sets(const Permutation& pi, int i) {
    const int d = static_cast<int>(pi.size());
    if (d < 1 || d > 63) throw ConfigError("permutation dimension must be in [1, 63]");
    std::uint64_t seen = 0;
    for (int v : pi) {
        if (v < 0 || v >= d) throw ConfigError("permutation entry out of range");
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (seen & bit) throw ConfigError("permutation has repeated entries");
        seen |= bit;
    }
    if (i < 0 || i >= d) throw ConfigError("feature does not occur in permutation");
    FeatureSubset u_minus(d);
    for (int v : pi) {
        if (v == i) break;
        u_minus.add(v);
    }
    FeatureSubset u_plus = u_minus;
    u_plus.add(i);
    return {u_minus, u_plus};
}

} // namespace streamsage
