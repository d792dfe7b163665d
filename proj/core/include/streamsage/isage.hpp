#ifndef STREAMSAGE_ISAGE_HPP
#define STREAMSAGE_ISAGE_HPP

#include "streamsage/importance.hpp"
#include "streamsage/loss.hpp"
#include "streamsage/predictor.hpp"
#include "streamsage/removal.hpp"
#include "streamsage/rng.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// One incremental importance update on the sample (x, y).
//
// Smooths the mean prediction with this step's rate, samples a single
// permutation, and walks its prefixes: the contribution of the feature
// added at position j is the loss drop caused by revealing it. The last
// prefix is the full feature set, so the per-step contributions telescope
// to loss(mean prediction) - loss(full model) exactly.
//
// Model evaluations per step: 1 (mean prediction) + d * inner samples.
StepDelta isage_step(ImportanceState& state,
                     const Predictor& model,
                     const RemovalStrategy& strategy,
                     const LossFunction& loss,
                     const Instance& x,
                     const Target& y,
                     RngHandle& rng);

} // namespace streamsage

#endif
