#include "streamsage/shapley.hpp"

#include <bit>
#include <cmath>
#include <memory>

#include "streamsage/error.hpp"

namespace streamsage {

GameOracle::GameOracle(int d, std::function<double(const FeatureSubset&)> fn)
    : d_(d), fn_(std::move(fn)) {
    if (d < 1 || d > 63) throw ConfigError("game dimension must be in 1..63");
    if (!fn_) throw ConfigError("game oracle needs an evaluation function");
}

double GameOracle::eval(const FeatureSubset& coalition) const {
    if (coalition.dim() != d_) throw ConfigError("coalition dimension mismatch");
    const double v = fn_(coalition);
    if (!std::isfinite(v)) throw NumericError("game value is non-finite");
    return v;
}

std::vector<double> brute_force_shapley(const GameOracle& oracle, int d) {
    if (d != oracle.dim()) throw ConfigError("dimension does not match the oracle");
    if (d > 12) throw ConfigError("exact enumeration is limited to d <= 12");

    const std::uint64_t full = (d == 63) ? ~0ull : ((1ull << d) - 1ull);
    std::vector<double> value(static_cast<std::size_t>(full) + 1);
    for (std::uint64_t mask = 0; mask <= full; ++mask)
        value[static_cast<std::size_t>(mask)] = oracle.eval(FeatureSubset::from_bits(d, mask));

    std::vector<double> fact(static_cast<std::size_t>(d) + 1, 1.0);
    for (int k = 1; k <= d; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;

    std::vector<double> phi(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        const std::uint64_t bit = 1ull << i;
        double acc = 0.0;
        for (std::uint64_t mask = 0; mask <= full; ++mask) {
            if (mask & bit) continue;
            const int s = std::popcount(mask);
            const double w = fact[static_cast<std::size_t>(s)] *
                             fact[static_cast<std::size_t>(d - 1 - s)] /
                             fact[static_cast<std::size_t>(d)];
            acc += w * (value[static_cast<std::size_t>(mask | bit)] - value[static_cast<std::size_t>(mask)]);
        }
        phi[static_cast<std::size_t>(i)] = acc;
    }
    return phi;
}

GameOracle make_loss_game(const Predictor& model,
                          const RemovalStrategy& strategy,
                          const std::vector<LabeledSample>& dataset,
                          const LossFunction& loss,
                          std::uint64_t seed) {
    if (dataset.empty()) throw ConfigError("loss game needs a nonempty dataset");
    const int d = static_cast<int>(dataset.front().x.size());

    PredictionMean acc;
    for (const auto& s : dataset) acc.add(model.predict(s.x));
    const Prediction y_mean = acc.mean();
    double base = 0.0;
    for (const auto& s : dataset) base += loss_eval(loss, y_mean, s.y);
    base /= static_cast<double>(dataset.size());

    auto rng = std::make_shared<RngHandle>(seed);
    auto fn = [&model, strategy, &dataset, loss, base, rng](const FeatureSubset& coalition) {
        if (coalition.count() == 0) return 0.0;
        RngHandle& r = *rng;
        double restricted = 0.0;
        for (const auto& s : dataset)
            restricted += loss_eval(loss, restricted_predict(model, strategy, s.x, coalition, r), s.y);
        restricted /= static_cast<double>(dataset.size());
        return base - restricted;
    };
    return GameOracle{d, std::move(fn)};
}

} // namespace streamsage
