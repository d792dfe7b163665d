#ifndef STREAMSAGE_BATCH_SAGE_HPP
#define STREAMSAGE_BATCH_SAGE_HPP

#include <vector>

#include "streamsage/loss.hpp"
#include "streamsage/predictor.hpp"
#include "streamsage/rng.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// Sampling-based global importance over a fixed dataset: one permutation per
// sample, replacement values drawn uniformly from the dataset itself, deltas
// averaged per feature. The mean prediction plays the empty-coalition role.
//
// Model evaluations: N (mean prediction pass) + N * d * m.
std::vector<double> batch_sage(const std::vector<LabeledSample>& dataset,
                               const Predictor& model,
                               const LossFunction& loss,
                               int inner_samples,
                               RngHandle& rng);

} // namespace streamsage

#endif
