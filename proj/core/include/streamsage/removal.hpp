#ifndef STREAMSAGE_REMOVAL_HPP
#define STREAMSAGE_REMOVAL_HPP

#include <optional>

#include "streamsage/conditional.hpp"
#include "streamsage/predictor.hpp"
#include "streamsage/reservoir.hpp"
#include "streamsage/subset.hpp"

namespace streamsage {

enum class RemovalKind { interventional, observational };

// Feature-removal mechanism: keeps a stream summary and fills features
// outside a coalition with replacement draws. Interventional removal draws
// whole instances from a geometric reservoir (marginal law); observational
// removal draws per-feature from a conditional tree store.
class RemovalStrategy {
public:
    // m is the number of inner replacement samples per restricted prediction.
    static RemovalStrategy interventional(int m, int reservoir_capacity, std::uint64_t seed);
    static RemovalStrategy observational(int m, const StreamSchema& schema,
                                         int reservoir_capacity, const TreeConfig& tree_config,
                                         std::uint64_t seed);

    // Stream update (reservoir insert or conditional-store learn + insert).
    void observe(const Instance& x);

    RemovalKind kind() const { return kind_; }
    int inner_samples() const { return m_; }
    // Copy with a different inner-sample count; the stores are shared state
    // snapshots, useful for high-precision offline evaluation.
    RemovalStrategy with_inner_samples(int m) const {
        if (m < 1) throw ConfigError("inner sample count must be >= 1");
        RemovalStrategy out = *this;
        out.m_ = m;
        return out;
    }
    int reservoir_capacity() const { return capacity_; }
    bool initialized() const;

    // x with every feature outside `coalition` replaced by one draw.
    Instance draw_spliced(const Instance& x, const FeatureSubset& coalition,
                          RngHandle& rng) const;

    const GeometricReservoir& marginal_store() const;
    const ConditionalTreeStore& conditional_store() const;

private:
    RemovalStrategy(RemovalKind kind, int m, int capacity, std::uint64_t seed);

    RemovalKind kind_;
    int m_;
    int capacity_;
    RngHandle rng_; // drives store maintenance, not estimator draws
    std::optional<GeometricReservoir> marginal_;
    std::optional<ConditionalTreeStore> conditional_;
};

// Restricted model output f(x, S): features in S keep their value in x, the
// rest are filled by the strategy; the m resulting predictions are averaged.
// With S full this is exactly model.predict(x) and consumes no randomness,
// though the model is still evaluated m times to keep cost accounting
// uniform across coalition sizes.
Prediction restricted_predict(const Predictor& model, const RemovalStrategy& strategy,
                              const Instance& x, const FeatureSubset& coalition,
                              RngHandle& rng);

} // namespace streamsage

#endif
