#include "streamsage/types.hpp"

namespace streamsage {

Prediction prediction_mix(const Prediction& a, const Prediction& b, double wa, double wb) {
    if (a.kind() != b.kind()) throw KindError("cannot mix predictions of different kinds");
    if (a.kind() == PredictionKind::real) return Prediction::real(wa * a.value() + wb * b.value());
    const auto& pa = a.probs();
    const auto& pb = b.probs();
    if (pa.size() != pb.size())
        throw KindError("cannot mix probability vectors of different lengths");
    std::vector<double> out(pa.size());
    double total = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        out[k] = wa * pa[k] + wb * pb[k];
        total += out[k];
    }
    if (total > 0.0) {
        for (double& v : out) v /= total;
    }
    return Prediction::probabilities(std::move(out));
}

void PredictionMean::add(const Prediction& p) {
    if (count_ == 0) {
        is_probs_ = p.kind() == PredictionKind::probabilities;
        if (is_probs_) sum_probs_.assign(p.probs().size(), 0.0);
    }
    if (is_probs_) {
        const auto& probs = p.probs();
        if (probs.size() != sum_probs_.size())
            throw KindError("cannot average probability vectors of different lengths");
        for (std::size_t k = 0; k < probs.size(); ++k) sum_probs_[k] += probs[k];
    } else {
        sum_real_ += p.value();
    }
    ++count_;
}

Prediction PredictionMean::mean() const {
    if (count_ == 0) throw StateError("mean of zero predictions");
    if (!is_probs_) return Prediction::real(sum_real_ / static_cast<double>(count_));
    std::vector<double> out(sum_probs_.size());
    double total = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = sum_probs_[k] / static_cast<double>(count_);
        total += out[k];
    }
    if (total > 0.0) {
        for (double& v : out) v /= total;
    }
    return Prediction::probabilities(std::move(out));
}

} // namespace streamsage
