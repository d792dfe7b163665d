#ifndef STREAMSAGE_HARNESS_HPP
#define STREAMSAGE_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "streamsage/importance.hpp"
#include "streamsage/loss.hpp"
#include "streamsage/model.hpp"
#include "streamsage/removal.hpp"
#include "streamsage/streams.hpp"
#include "streamsage/window.hpp"

namespace streamsage {

// One recorded explanation: step index, prequential loss of the model's own
// prediction, generating concept, warm-up flag, and the importance vector.
struct TrajectoryPoint {
    std::uint64_t t = 0;
    double loss = 0.0;
    int concept_id = 0;
    bool warmup = false;
    std::vector<double> phi;
};

struct Trajectory {
    int dim = 0;
    std::vector<TrajectoryPoint> points; // strictly increasing t
};

struct RunStats {
    std::uint64_t steps = 0;          // stream samples consumed
    std::uint64_t predict_evals = 0;  // prequential predictions
    std::uint64_t explain_evals = 0;  // model evaluations inside explanations
    std::uint64_t explain_outputs = 0;
};

// Incremental explainer; inner samples per prefix come from the removal
// strategy itself.
struct IsageConfig {
    AlphaSchedule alpha = AlphaSchedule::constant(0.001);
};

// Sliding-window baseline: window length, recompute stride, inner samples.
struct SwConfig {
    int window = 500;
    int stride = 25;
    int inner_samples = 1;
};

using ExplainerConfig = std::variant<IsageConfig, SwConfig>;

// Prequential explanation loop. Per sample, in order: predict (scoring the
// prequential loss), explain, removal-strategy update, model update (skipped
// for frozen models). The first step only seeds the strategy, so incremental
// explanations start at t = 2 (the estimate reads 0 before that); window
// explanations start when the window fills. Incremental points are recorded
// every record_stride steps, window points every record_stride outputs, and
// the final step always; points are marked warm-up while
// t <= max(2, reservoir length, window). Component failures abort with the
// step index. Progress lines go to `progress` every 1000 steps when non-null.
Trajectory prequential_run(StreamSource& stream, Model& model,
                           const ExplainerConfig& explainer, RemovalStrategy& strategy,
                           const LossFunction& loss, std::uint64_t budget, RngHandle& rng,
                           RunStats* stats = nullptr, std::uint64_t record_stride = 1,
                           const std::function<void(const TrajectoryPoint&)>& sink = {},
                           std::ostream* progress = nullptr);

// Mean squared / absolute deviation over aligned, non-warm-up records,
// averaged over steps and features. Throws when the surviving time indices
// differ. Empty overlap yields (0, 0).
struct TrajectoryError {
    double mse = 0.0;
    double mae = 0.0;
    std::uint64_t records = 0; // scored (step, feature) pairs / dim
};
TrajectoryError trajectory_error(const Trajectory& est, const Trajectory& gt);

// CSV export: header `t,loss,concept,phi_<name>...`, one row per record,
// doubles printed with enough digits to round-trip bit-exactly. The warm-up
// flag is not serialized; parsed trajectories read as fully warmed up.
void export_trajectory(const Trajectory& traj, const StreamSchema& schema,
                       const std::string& path);
Trajectory parse_trajectory(const std::string& path);

} // namespace streamsage

#endif
