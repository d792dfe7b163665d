#include "streamsage/removal.hpp"

namespace streamsage {

RemovalStrategy::RemovalStrategy(RemovalKind kind, int m, int capacity, std::uint64_t seed)
    : kind_(kind), m_(m), capacity_(capacity), rng_(seed) {
    if (m < 1) throw ConfigError("inner sample count must be >= 1");
    if (capacity < 1) throw ConfigError("reservoir capacity must be >= 1");
}

RemovalStrategy RemovalStrategy::interventional(int m, int reservoir_capacity,
                                                std::uint64_t seed) {
    RemovalStrategy s(RemovalKind::interventional, m, reservoir_capacity, seed);
    s.marginal_.emplace(reservoir_capacity);
    return s;
}

RemovalStrategy RemovalStrategy::observational(int m, const StreamSchema& schema,
                                               int reservoir_capacity,
                                               const TreeConfig& tree_config,
                                               std::uint64_t seed) {
    RemovalStrategy s(RemovalKind::observational, m, reservoir_capacity, seed);
    s.conditional_.emplace(schema, reservoir_capacity, tree_config, s.rng_.next_u64());
    return s;
}

void RemovalStrategy::observe(const Instance& x) {
    if (kind_ == RemovalKind::interventional) {
        marginal_->update(x, rng_);
    } else {
        conditional_->update(x);
    }
}

bool RemovalStrategy::initialized() const {
    return kind_ == RemovalKind::interventional ? !marginal_->empty()
                                                : conditional_->initialized();
}

Instance RemovalStrategy::draw_spliced(const Instance& x, const FeatureSubset& coalition,
                                       RngHandle& rng) const {
    if (!initialized()) throw StateError("removal strategy has not observed any instance");
    Instance out = x;
    if (kind_ == RemovalKind::interventional) {
        // One stored instance supplies every absent feature.
        const Instance& repl = marginal_->sample(rng);
        for (int j = 0; j < coalition.dim(); ++j)
            if (!coalition.contains(j)) out[static_cast<std::size_t>(j)] =
                repl[static_cast<std::size_t>(j)];
    } else {
        const std::vector<FeatureValue> draws =
            conditional_->sample_absent(x, coalition, rng);
        std::size_t at = 0;
        for (int j = 0; j < coalition.dim(); ++j)
            if (!coalition.contains(j)) out[static_cast<std::size_t>(j)] = draws[at++];
    }
    return out;
}

const GeometricReservoir& RemovalStrategy::marginal_store() const {
    if (!marginal_) throw StateError("strategy has no marginal store");
    return *marginal_;
}

const ConditionalTreeStore& RemovalStrategy::conditional_store() const {
    if (!conditional_) throw StateError("strategy has no conditional store");
    return *conditional_;
}

Prediction restricted_predict(const Predictor& model, const RemovalStrategy& strategy,
                              const Instance& x, const FeatureSubset& coalition,
                              RngHandle& rng) {
    const int m = strategy.inner_samples();
    if (coalition.is_full()) {
        Prediction out = model.predict(x);
        for (int k = 1; k < m; ++k) (void)model.predict(x);
        return out;
    }
    if (!strategy.initialized())
        throw StateError("removal strategy has not observed any instance");
    PredictionMean acc;
    for (int k = 0; k < m; ++k)
        acc.add(model.predict(strategy.draw_spliced(x, coalition, rng)));
    return acc.mean();
}

} // namespace streamsage
