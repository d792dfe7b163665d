#ifndef STREAMSAGE_IMPORTANCE_HPP
#define STREAMSAGE_IMPORTANCE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "streamsage/error.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// Smoothing rate schedule. A constant rate tracks drifting importance; the
// harmonic rate 1/t turns the estimate into a running average, which matches
// a batch computation on a static stream.
class AlphaSchedule {
public:
    static AlphaSchedule constant(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
        return AlphaSchedule{alpha};
    }
    static AlphaSchedule harmonic() { return AlphaSchedule{0.0}; }

    bool is_harmonic() const { return alpha_ == 0.0; }
    // Rate for explanation step t (1-based).
    double at(std::uint64_t t) const {
        return is_harmonic() ? 1.0 / static_cast<double>(t) : alpha_;
    }
    double constant_rate() const { return alpha_; }

private:
    explicit AlphaSchedule(double alpha) : alpha_(alpha) {}
    double alpha_;
};

// Exponentially smoothed importance estimate plus the matching smoothed
// mean prediction. The first step initializes both directly; afterwards one
// shared rate updates every feature and the mean prediction.
class ImportanceState {
public:
    ImportanceState(int d, AlphaSchedule schedule);

    int dim() const { return d_; }
    std::uint64_t steps() const { return steps_; }
    const AlphaSchedule& schedule() const { return schedule_; }
    const std::vector<double>& phi() const { return phi_; }
    const Prediction& mean_prediction() const; // StateError before the first step

    // Internal transitions, driven by isage_step.
    double begin_step();                       // advances t, returns the step's rate
    void absorb_mean(const Prediction& fx, double alpha);
    void absorb_delta(const std::vector<double>& delta, double alpha);

private:
    int d_;
    AlphaSchedule schedule_;
    std::vector<double> phi_;
    std::optional<Prediction> mean_pred_;
    std::uint64_t steps_ = 0;
};

// Per-step marginal contributions; delta is indexed by feature and the
// telescoping identity sum(delta) == loss_empty - loss_full holds exactly.
struct StepDelta {
    std::vector<double> delta;
    double loss_empty = 0.0;
    double loss_full = 0.0;
};

} // namespace streamsage

#endif
