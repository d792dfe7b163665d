#include "streamsage/batch_sage.hpp"

#include "streamsage/error.hpp"
#include "streamsage/subset.hpp"

namespace streamsage {

std::vector<double> batch_sage(const std::vector<LabeledSample>& dataset,
                               const Predictor& model,
                               const LossFunction& loss,
                               int inner_samples,
                               RngHandle& rng) {
    if (dataset.empty()) throw ConfigError("batch importance needs a nonempty dataset");
    if (inner_samples < 1) throw ConfigError("inner sample count must be >= 1");
    const std::size_t n = dataset.size();
    const int d = static_cast<int>(dataset.front().x.size());
    if (d < 1) throw ConfigError("dataset instances are empty");

    PredictionMean mean_acc;
    for (const auto& s : dataset) mean_acc.add(model.predict(s.x));
    const Prediction y_empty = mean_acc.mean();

    std::vector<double> phi(static_cast<std::size_t>(d), 0.0);
    Instance spliced;
    for (const auto& s : dataset) {
        const std::vector<int> pi = sample_permutation(d, rng);
        FeatureSubset revealed(d);
        double loss_prev = loss_eval(loss, y_empty, s.y);
        for (int j = 0; j < d; ++j) {
            const int feat = pi[static_cast<std::size_t>(j)];
            revealed.add(feat);
            Prediction p = Prediction::real(0.0);
            if (revealed.is_full()) {
                // Exact by construction; extra evaluations keep the cost
                // model uniform across prefix sizes.
                p = model.predict(s.x);
                for (int k = 1; k < inner_samples; ++k) (void)model.predict(s.x);
            } else {
                PredictionMean inner;
                for (int k = 0; k < inner_samples; ++k) {
                    const LabeledSample& ref = dataset[rng.below(n)];
                    spliced = s.x;
                    for (int a : revealed.complement_members())
                        spliced[static_cast<std::size_t>(a)] = ref.x[static_cast<std::size_t>(a)];
                    inner.add(model.predict(spliced));
                }
                p = inner.mean();
            }
            const double l = loss_eval(loss, p, s.y);
            phi[static_cast<std::size_t>(feat)] += loss_prev - l;
            loss_prev = l;
        }
    }
    for (double& v : phi) v /= static_cast<double>(n);
    return phi;
}

} // namespace streamsage
