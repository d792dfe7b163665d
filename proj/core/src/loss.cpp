#include "streamsage/loss.hpp"

#include <algorithm>
#include <cmath>

namespace streamsage {

double loss_eval(const LossFunction& loss, const Prediction& pred, const Target& y) {
    double out = 0.0;
    switch (loss.kind) {
    case LossKind::cross_entropy: {
        if (pred.kind() != PredictionKind::probabilities)
            throw KindError("cross-entropy needs a probability prediction");
        if (y.kind() != TargetKind::klass)
            throw KindError("cross-entropy needs a class target");
        const auto& p = pred.probs();
        const auto k = static_cast<std::size_t>(y.label());
        if (k >= p.size()) throw KindError("class label outside prediction support");
        const double clipped = std::clamp(p[k], kProbabilityClip, 1.0 - kProbabilityClip);
        out = -std::log(clipped);
        break;
    }
    case LossKind::absolute: {
        if (pred.kind() != PredictionKind::real)
            throw KindError("absolute loss needs a real prediction");
        if (y.kind() != TargetKind::real)
            throw KindError("absolute loss needs a real target");
        out = std::abs(pred.value() - y.value());
        break;
    }
    }
    if (!std::isfinite(out)) throw NumericError("loss is not finite");
    return out;
}

} // namespace streamsage
