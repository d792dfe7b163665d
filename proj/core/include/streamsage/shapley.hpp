#ifndef STREAMSAGE_SHAPLEY_HPP
#define STREAMSAGE_SHAPLEY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "streamsage/loss.hpp"
#include "streamsage/predictor.hpp"
#include "streamsage/removal.hpp"
#include "streamsage/subset.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// Evaluable cooperative game over feature coalitions.
class GameOracle {
public:
    GameOracle(int d, std::function<double(const FeatureSubset&)> fn);

    int dim() const { return d_; }
    double eval(const FeatureSubset& coalition) const;

private:
    int d_;
    std::function<double(const FeatureSubset&)> fn_;
};

// Exact Shapley values by full subset enumeration; d <= 12.
std::vector<double> brute_force_shapley(const GameOracle& oracle, int d);

// Loss-improvement game nu(S) = E[loss(mean prediction, Y)] -
// E[loss(f(X,S), Y)], both expectations taken over the dataset, restricted
// predictions through a snapshot of the removal strategy. nu(empty) is 0
// exactly because the mean prediction itself stands in for the empty
// coalition. Use strategy.with_inner_samples(...) beforehand for precision.
// The returned oracle references model and dataset; keep both alive while
// it is in use (the strategy snapshot is copied).
GameOracle make_loss_game(const Predictor& model,
                          const RemovalStrategy& strategy,
                          const std::vector<LabeledSample>& dataset,
                          const LossFunction& loss,
                          std::uint64_t seed);

} // namespace streamsage

#endif
