#ifndef STREAMSAGE_CONDITIONAL_HPP
#define STREAMSAGE_CONDITIONAL_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "streamsage/reservoir.hpp"
#include "streamsage/tree.hpp"

namespace streamsage {

// Approximates the conditional law of each feature given any subset of the
// others. Per feature i it grows an incremental tree that predicts feature i
// from the remaining features and keeps one geometric reservoir of full
// instances per leaf; leaf create/destroy events keep the tree-to-reservoir
// map a bijection.
class ConditionalTreeStore {
public:
    ConditionalTreeStore(const StreamSchema& schema, int reservoir_capacity,
                         const TreeConfig& tree_config, std::uint64_t seed);

    // Learns every per-feature tree on x, applies the resulting leaf events,
    // then stores x in the leaf it deterministically routes to.
    void update(const Instance& x);

    // For each feature j outside `present`, routes tree j with the present
    // features, draws one stored instance from the reached leaf's reservoir
    // (falling back to the nearest ancestor with stored instances), and
    // returns component j of the draw. Draws are independent across features.
    std::vector<FeatureValue> sample_absent(const Instance& x, const FeatureSubset& present,
                                            RngHandle& rng) const;

    std::uint64_t seen() const { return seen_; }
    bool initialized() const { return seen_ > 0; }
    const StreamSchema& schema() const { return schema_; }
    const IncrementalTree& tree(int feature) const;

    // Test hook: every leaf of every tree has exactly one reservoir.
    void check_bijection() const;

private:
    FeatureValue draw_component(int feature, const Instance& x, const FeatureSubset& present,
                                RngHandle& rng) const;

    StreamSchema schema_;
    int capacity_;
    std::vector<IncrementalTree> trees_;
    std::vector<std::unordered_map<std::uint64_t, GeometricReservoir>> leaf_store_;
    RngHandle rng_;
    std::uint64_t seen_ = 0;
};

} // namespace streamsage

#endif
