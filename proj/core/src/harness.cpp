#include "streamsage/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "streamsage/isage.hpp"

namespace streamsage {

Trajectory prequential_run(StreamSource& stream, Model& model,
                           const ExplainerConfig& explainer, RemovalStrategy& strategy,
                           const LossFunction& loss, std::uint64_t budget, RngHandle& rng,
                           RunStats* stats, std::uint64_t record_stride,
                           const std::function<void(const TrajectoryPoint&)>& sink,
                           std::ostream* progress) {
    if (record_stride < 1) throw ConfigError("record stride must be >= 1");
    const int d = stream.schema().dim();
    Trajectory traj;
    traj.dim = d;

    CountingModel counting(model);
    const auto* icfg = std::get_if<IsageConfig>(&explainer);
    const auto* scfg = std::get_if<SwConfig>(&explainer);

    std::optional<ImportanceState> state;
    std::optional<WindowBuffer> buf;
    std::uint64_t warmup_until = 2;
    warmup_until = std::max<std::uint64_t>(warmup_until,
                                           static_cast<std::uint64_t>(strategy.reservoir_capacity()));
    if (icfg) {
        state.emplace(d, icfg->alpha);
    } else {
        buf.emplace(scfg->window);
        warmup_until = std::max<std::uint64_t>(warmup_until,
                                               static_cast<std::uint64_t>(scfg->window));
    }

    RunStats local;
    std::uint64_t t = 0;
    while (t < budget) {
        auto rec = stream.next();
        if (!rec) break;
        ++t;
        try {
            const Instance& x = rec->sample.x;
            const Target& y = rec->sample.y;

            const Prediction yhat = model.predict(x);
            const double step_loss = loss_eval(loss, yhat, y);
            ++local.predict_evals;

            bool have_point = false;
            TrajectoryPoint point;
            if (icfg) {
                if (strategy.initialized()) {
                    (void)isage_step(*state, counting, strategy, loss, x, y, rng);
                    ++local.explain_outputs;
                }
                // Recorded even before the first explanation (estimate 0),
                // so a run of N steps yields exactly N rows at stride 1.
                if (t % record_stride == 0 || t == budget) {
                    point.phi = state->phi();
                    have_point = true;
                }
            } else {
                auto out = swsage_step(*buf, rec->sample, counting, loss, scfg->inner_samples,
                                       scfg->stride, rng);
                if (out) {
                    ++local.explain_outputs;
                    if (local.explain_outputs % record_stride == 0 || t == budget) {
                        point.phi = std::move(*out);
                        have_point = true;
                    }
                }
            }
            if (have_point) {
                point.t = t;
                point.loss = step_loss;
                point.concept_id = rec->concept_id;
                point.warmup = t <= warmup_until;
                traj.points.push_back(point);
                if (sink) sink(traj.points.back());
            }

            strategy.observe(x);
            if (model.trainable()) model.learn_one(rec->sample);
        } catch (const Error& e) {
            throw Error("step " + std::to_string(t) + ": " + e.what());
        }
        if (progress && t % 1000 == 0)
            *progress << "step " << t << "/" << budget << "\n";
    }

    local.steps = t;
    local.explain_evals = counting.predict_calls();
    if (stats) *stats = local;
    return traj;
}

TrajectoryError trajectory_error(const Trajectory& est, const Trajectory& gt) {
    if (est.dim != gt.dim) throw ConfigError("trajectory dimensions differ");
    std::vector<const TrajectoryPoint*> a, b;
    for (const auto& p : est.points)
        if (!p.warmup) a.push_back(&p);
    for (const auto& p : gt.points)
        if (!p.warmup) b.push_back(&p);
    if (a.size() != b.size()) throw ConfigError("trajectories cover different steps");

    TrajectoryError out;
    double se = 0.0, ae = 0.0;
    std::uint64_t cells = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k]->t != b[k]->t) throw ConfigError("trajectories cover different steps");
        if (a[k]->phi.size() != b[k]->phi.size())
            throw ConfigError("trajectory dimensions differ");
        for (std::size_t i = 0; i < a[k]->phi.size(); ++i) {
            const double dv = a[k]->phi[i] - b[k]->phi[i];
            se += dv * dv;
            ae += std::abs(dv);
            ++cells;
        }
    }
    out.records = a.size();
    if (cells > 0) {
        out.mse = se / static_cast<double>(cells);
        out.mae = ae / static_cast<double>(cells);
    }
    return out;
}

} // namespace streamsage
