#include "streamsage/conditional.hpp"

#include <algorithm>

namespace streamsage {

ConditionalTreeStore::ConditionalTreeStore(const StreamSchema& schema, int reservoir_capacity,
                                           const TreeConfig& tree_config, std::uint64_t seed)
    : schema_(schema), capacity_(reservoir_capacity), rng_(seed) {
    if (reservoir_capacity < 1) throw ConfigError("reservoir capacity must be >= 1");
    const int d = schema_.dim();
    const std::uint64_t full = d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
    trees_.reserve(static_cast<std::size_t>(d));
    leaf_store_.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const FeatureSpec& f = schema_.feature(i);
        const bool categorical = f.kind == FeatureKind::categorical;
        const TargetKind kind = categorical ? TargetKind::klass : TargetKind::real;
        const int classes = categorical ? static_cast<int>(f.alphabet.size()) : 0;
        const std::uint64_t mask = full & ~(std::uint64_t{1} << i);
        trees_.emplace_back(schema_, kind, classes, tree_config, mask, rng_.next_u64());
        for (std::uint64_t id : trees_.back().leaf_ids())
            leaf_store_[static_cast<std::size_t>(i)].emplace(id,
                                                             GeometricReservoir(capacity_));
    }
}

void ConditionalTreeStore::update(const Instance& x) {
    schema_.validate_instance(x);
    ++seen_;
    for (int i = 0; i < schema_.dim(); ++i) {
        const auto is = static_cast<std::size_t>(i);
        const FeatureSpec& f = schema_.feature(i);
        const Target y = f.kind == FeatureKind::categorical
                             ? Target::klass(x[is].cat())
                             : Target::real(x[is].num());
        const LeafEvent ev = trees_[is].learn_one(x, y);
        for (std::uint64_t id : ev.destroyed) leaf_store_[is].erase(id);
        for (std::uint64_t id : ev.created)
            leaf_store_[is].emplace(id, GeometricReservoir(capacity_));
        const std::uint64_t leaf = trees_[is].route_full(x);
        leaf_store_[is].at(leaf).update(x, rng_);
    }
}

std::vector<FeatureValue> ConditionalTreeStore::sample_absent(const Instance& x,
                                                              const FeatureSubset& present,
                                                              RngHandle& rng) const {
    if (!initialized()) throw StateError("conditional store has not observed any instance");
    if (present.dim() != schema_.dim())
        throw SchemaError("subset dimension does not match schema");
    std::vector<FeatureValue> out;
    out.reserve(static_cast<std::size_t>(schema_.dim() - present.count()));
    for (int j = 0; j < schema_.dim(); ++j) {
        if (present.contains(j)) continue;
        out.push_back(draw_component(j, x, present, rng));
    }
    return out;
}

FeatureValue ConditionalTreeStore::draw_component(int feature, const Instance& x,
                                                  const FeatureSubset& present,
                                                  RngHandle& rng) const {
    const auto fs = static_cast<std::size_t>(feature);
    const IncrementalTree& tree = trees_[fs];
    const auto& store = leaf_store_[fs];
    const std::uint64_t leaf = tree.route(x, present, rng);
    const GeometricReservoir& direct = store.at(leaf);
    if (!direct.empty()) return direct.sample(rng)[fs];
    // Empty leaf: aggregate the nearest ancestor whose subtree holds data.
    for (const auto& level : tree.ancestor_leaf_sets(leaf)) {
        std::vector<std::uint64_t> sizes;
        sizes.reserve(level.size());
        std::uint64_t total = 0;
        for (std::uint64_t id : level) {
            const std::uint64_t n = store.at(id).size();
            sizes.push_back(n);
            total += n;
        }
        if (total == 0) continue;
        const std::size_t pick = rng.weighted(sizes);
        return store.at(level[pick]).sample(rng)[fs];
    }
    throw StateError("conditional store holds no instances for feature " +
                     schema_.feature(feature).name);
}

const IncrementalTree& ConditionalTreeStore::tree(int feature) const {
    if (feature < 0 || feature >= schema_.dim())
        throw ConfigError("feature index out of range");
    return trees_[static_cast<std::size_t>(feature)];
}

void ConditionalTreeStore::check_bijection() const {
    for (int i = 0; i < schema_.dim(); ++i) {
        const auto is = static_cast<std::size_t>(i);
        std::vector<std::uint64_t> tree_leaves = trees_[is].leaf_ids();
        std::vector<std::uint64_t> stored;
        stored.reserve(leaf_store_[is].size());
        for (const auto& [id, res] : leaf_store_[is]) stored.push_back(id);
        std::sort(stored.begin(), stored.end());
        if (tree_leaves != stored)
            throw StateError("leaf-reservoir map out of sync for feature " +
                             schema_.feature(i).name);
    }
}

} // namespace streamsage
