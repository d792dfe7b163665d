#include "streamsage/importance.hpp"

#include <cmath>

namespace streamsage {

ImportanceState::ImportanceState(int d, AlphaSchedule schedule)
    : d_(d), schedule_(schedule) {
    if (d < 1 || d > 63) throw ConfigError("importance state needs 1..63 features");
    phi_.assign(static_cast<std::size_t>(d), 0.0);
}

const Prediction& ImportanceState::mean_prediction() const {
    if (!mean_pred_) throw StateError("no smoothed mean prediction before the first step");
    return *mean_pred_;
}

double ImportanceState::begin_step() {
    ++steps_;
    return schedule_.at(steps_);
}

void ImportanceState::absorb_mean(const Prediction& fx, double alpha) {
    if (!mean_pred_) {
        mean_pred_ = fx;
        return;
    }
    mean_pred_ = prediction_mix(*mean_pred_, fx, 1.0 - alpha, alpha);
}

void ImportanceState::absorb_delta(const std::vector<double>& delta, double alpha) {
    if (delta.size() != phi_.size()) throw ConfigError("delta dimension mismatch");
    if (steps_ == 1) {
        phi_ = delta;
        return;
    }
    for (std::size_t i = 0; i < phi_.size(); ++i) {
        phi_[i] = (1.0 - alpha) * phi_[i] + alpha * delta[i];
        if (!std::isfinite(phi_[i])) throw NumericError("importance estimate became non-finite");
    }
}

} // namespace streamsage
