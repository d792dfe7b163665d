#ifndef STREAMSAGE_RESERVOIR_HPP
#define STREAMSAGE_RESERVOIR_HPP

#include <cstdint>
#include <vector>

#include "streamsage/rng.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// Bounded instance store with geometric forgetting. The first L updates fill
// the reservoir; afterwards every incoming instance unconditionally replaces
// a uniformly chosen slot, so an instance stored at time r is still sampled
// at time s with probability (1/L) * (1 - 1/L)^(s - r - 1) for r >= L.
class GeometricReservoir {
public:
    explicit GeometricReservoir(int capacity);

    void update(const Instance& x, RngHandle& rng);

    // Uniform draw with replacement; StateError when empty.
    const Instance& sample(RngHandle& rng) const;

    int capacity() const { return capacity_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::uint64_t seen() const { return seen_; }
    const Instance& at(std::size_t i) const { return items_.at(i); }

private:
    int capacity_;
    std::uint64_t seen_ = 0;
    std::vector<Instance> items_;
};

} // namespace streamsage

#endif
