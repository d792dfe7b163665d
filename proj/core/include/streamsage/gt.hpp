#ifndef STREAMSAGE_GT_HPP
#define STREAMSAGE_GT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "streamsage/harness.hpp"

namespace streamsage {

// Drift ground-truth experiment: per repetition, a frozen model is
// pretrained per concept and its reference importance computed on the
// pretraining sample; estimators then track a sudden-drift stream while the
// frozen models switch in lockstep, and are scored per step against the
// piecewise-constant reference. Cross-entropy loss, interventional removal.
struct GtExperimentConfig {
    std::string scenario = "high";         // high | middle | low
    std::vector<int> concepts = {1, 2, 3}; // nine-feature stream concepts
    int pretrain_samples = 20000;
    int gt_inner_samples = 10;             // reference precision
    std::vector<int> windows = {100, 500, 1000, 2000};
    std::vector<int> sw_cost_factors = {1, 20}; // stride = window / factor
    int inner_samples = 1;                 // estimator inner samples
    std::uint64_t stream_length = 30000;
    int repetitions = 5;
    std::uint64_t seed = 1;
    int jobs = 1;                          // repetitions run in parallel
    int reservoir_capacity = 100;
    std::string model = "hoeffding";       // pretraining model recipe

    double p_switch() const;               // scenario mapping
    void validate() const;

    nlohmann::json to_json() const;
    static GtExperimentConfig from_json(const nlohmann::json& j);
    static GtExperimentConfig load(const std::string& path);
};

// Per-(estimator, window, cost factor) tracking error, aggregated over
// repetitions. The smoothing rate paired with window w is 2 / (w + 1).
struct ErrorCell {
    std::string estimator;  // "isage" | "sw"
    int window = 0;
    int cost_factor = 0;    // 0 for the incremental estimator
    double mse_mean = 0.0, mse_std = 0.0;
    double mae_mean = 0.0, mae_std = 0.0;
    std::uint64_t explain_evals = 0; // per repetition, exact
};

struct ErrorReport {
    std::string scenario;
    double p_switch = 0.0;
    int repetitions = 0;
    std::uint64_t stream_length = 0;
    std::vector<ErrorCell> cells;

    nlohmann::json to_json() const;
    static ErrorReport from_json(const nlohmann::json& j);
    void save(const std::string& path) const;

    const ErrorCell& cell(const std::string& estimator, int window, int cost_factor) const;
};

// Runs the experiment; optional progress stream (thread-safe) and directory
// for per-repetition trajectory CSV dumps.
ErrorReport gt_experiment(const GtExperimentConfig& cfg, std::ostream* progress = nullptr,
                          const std::string& traj_dir = "");

} // namespace streamsage

#endif
