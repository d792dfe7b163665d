#ifndef STREAMSAGE_SUBSET_HPP
#define STREAMSAGE_SUBSET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "streamsage/error.hpp"
#include "streamsage/rng.hpp"

namespace streamsage {

// Subset of feature indices {0, ..., d-1}, d <= 63, stored as a bit mask.
class FeatureSubset {
public:
    explicit FeatureSubset(int d);
    static FeatureSubset full(int d);
    static FeatureSubset from_bits(int d, std::uint64_t bits);

    int dim() const { return d_; }
    std::uint64_t bits() const { return bits_; }
    bool contains(int i) const {
        check_index(i);
        return (bits_ >> i) & 1u;
    }
    void add(int i) {
        check_index(i);
        bits_ |= (std::uint64_t{1} << i);
    }
    void remove(int i) {
        check_index(i);
        bits_ &= ~(std::uint64_t{1} << i);
    }
    int count() const;
    bool empty() const { return bits_ == 0; }
    bool is_full() const { return bits_ == full_mask(); }

    std::vector<int> members() const;
    std::vector<int> complement_members() const;

    bool operator==(const FeatureSubset& o) const { return d_ == o.d_ && bits_ == o.bits_; }

private:
    void check_index(int i) const {
        if (i < 0 || i >= d_) throw ConfigError("feature index out of range");
    }
    std::uint64_t full_mask() const {
        return d_ == 0 ? 0 : (~std::uint64_t{0} >> (64 - d_));
    }
    std::uint64_t bits_ = 0;
    int d_ = 0;
};

using Permutation = std::vector<int>;

// Uniform random permutation of {0, ..., d-1}; every ordering has equal
// probability. d must be positive.
Permutation sample_permutation(int d, RngHandle& rng);

// For feature i within permutation pi, returns (u_minus, u_plus): the set of
// features strictly preceding i, and the same set with i added. Throws
// ConfigError when pi is not a permutation or i does not occur in it.
std::pair<FeatureSubset, FeatureSubset> preceding_sets(const Permutation& pi, int i);

} // namespace streamsage

#endif
