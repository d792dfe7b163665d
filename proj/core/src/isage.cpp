#include "streamsage/isage.hpp"

#include "streamsage/subset.hpp"

namespace streamsage {

StepDelta isage_step(ImportanceState& state,
                     const Predictor& model,
                     const RemovalStrategy& strategy,
                     const LossFunction& loss,
                     const Instance& x,
                     const Target& y,
                     RngHandle& rng) {
    const int d = state.dim();
    if (static_cast<int>(x.size()) != d) throw ConfigError("instance dimension mismatch");

    const double alpha = state.begin_step();
    state.absorb_mean(model.predict(x), alpha);

    StepDelta out;
    out.delta.assign(static_cast<std::size_t>(d), 0.0);
    out.loss_empty = loss_eval(loss, state.mean_prediction(), y);

    const std::vector<int> pi = sample_permutation(d, rng);
    FeatureSubset revealed(d);
    double loss_prev = out.loss_empty;
    for (int j = 0; j < d; ++j) {
        revealed.add(pi[static_cast<std::size_t>(j)]);
        const Prediction p = restricted_predict(model, strategy, x, revealed, rng);
        const double l = loss_eval(loss, p, y);
        out.delta[static_cast<std::size_t>(pi[static_cast<std::size_t>(j)])] = loss_prev - l;
        loss_prev = l;
    }
    out.loss_full = loss_prev;

    state.absorb_delta(out.delta, alpha);
    return out;
}

} // namespace streamsage
