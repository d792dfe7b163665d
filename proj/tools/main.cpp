// Command-line frontend: prequential explanation runs, the drift
// ground-truth experiment, and the static batch-equivalence check.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "streamsage/batch_sage.hpp"
#include "streamsage/gt.hpp"
#include "streamsage/harness.hpp"
#include "streamsage/isage.hpp"

namespace {

using namespace streamsage;

struct CommonArgs {
    std::uint64_t seed = 0;
    bool seed_given = false;

    std::uint64_t resolve_seed() {
        if (!seed_given) {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        std::cout << "seed: " << seed << "\n";
        return seed;
    }
};

struct ExplainArgs : CommonArgs {
    std::string stream;
    std::string schema_path;
    std::string model = "hoeffding";
    std::string estimator = "isage";
    std::string removal = "interventional";
    double alpha = 0.001; // 0 selects the 1/t schedule
    int window = 500;
    int stride = 0; // 0 = window / 20
    int inner_samples = 5;
    int reservoir = 100;
    std::uint64_t steps = 10000;
    std::string out = "trajectory.csv";
};

struct GtArgs : CommonArgs {
    std::string scenario = "high";
    int reps = 5;
    int jobs = 1;
    std::string out = "error_report.json";
    std::string config_path;
    std::string traj_dir;
    bool reps_given = false, jobs_given = false, scenario_given = false;
};

struct StaticArgs : CommonArgs {
    std::string stream;
    std::string schema_path;
    std::string model;
    int reps = 20;
    int inner_samples = 5;
    int reservoir = 100;
    double alpha = 0.0; // 1/t
};

void check_alpha(double alpha) {
    if (alpha == 0.0) return; // harmonic schedule
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("--alpha must be in (0, 1), or 0 for the 1/t schedule; got " +
                          std::to_string(alpha));
}

AlphaSchedule schedule_from(double alpha) {
    return alpha == 0.0 ? AlphaSchedule::harmonic() : AlphaSchedule::constant(alpha);
}

LossFunction loss_for(const StreamSchema& schema) {
    return schema.target().kind == TargetKind::klass ? LossFunction::cross_entropy()
                                                     : LossFunction::absolute();
}

RemovalStrategy strategy_from(const std::string& removal, int m, int reservoir,
                              const StreamSchema& schema, std::uint64_t seed) {
    if (removal == "interventional") return RemovalStrategy::interventional(m, reservoir, seed);
    if (removal == "observational")
        return RemovalStrategy::observational(m, schema, reservoir, TreeConfig{}, seed);
    throw ConfigError("--removal must be interventional or observational; got '" + removal + "'");
}

int cmd_explain(ExplainArgs& a) {
    check_alpha(a.alpha);
    if (a.estimator != "isage" && a.estimator != "swsage")
        throw ConfigError("--estimator must be isage or swsage; got '" + a.estimator + "'");
    if (a.window < 2) throw ConfigError("--window must be >= 2");
    if (a.stride < 0) throw ConfigError("--stride must be >= 1 (0 = window/20)");
    if (a.inner_samples < 1) throw ConfigError("--inner-samples must be >= 1");
    if (a.reservoir < 1) throw ConfigError("--reservoir must be >= 1");

    const std::uint64_t seed = a.resolve_seed();
    RngHandle master(seed);
    const std::uint64_t stream_seed = master.next_u64();
    const std::uint64_t model_seed = master.next_u64();
    const std::uint64_t strategy_seed = master.next_u64();
    RngHandle run_rng(master.next_u64());

    std::optional<StreamSchema> csv_schema;
    if (!a.schema_path.empty()) csv_schema = StreamSchema::load(a.schema_path);
    auto stream = stream_build(StreamSpecText{a.stream}, csv_schema, stream_seed);
    const StreamSchema& schema = stream->schema();

    auto model = model_build(ModelSpec::parse(a.model), schema, model_seed);
    auto strategy = strategy_from(a.removal, a.inner_samples, a.reservoir, schema, strategy_seed);
    const LossFunction loss = loss_for(schema);

    ExplainerConfig explainer;
    if (a.estimator == "isage") {
        explainer = IsageConfig{schedule_from(a.alpha)};
    } else {
        const int stride = a.stride == 0 ? std::max(1, a.window / 20) : a.stride;
        explainer = SwConfig{a.window, stride, a.inner_samples};
    }

    RunStats stats;
    Trajectory traj = prequential_run(*stream, *model, explainer, strategy, loss, a.steps,
                                      run_rng, &stats, 1, {}, &std::cerr);
    export_trajectory(traj, schema, a.out);

    double mean_loss = 0.0;
    for (const auto& p : traj.points) mean_loss += p.loss;
    if (!traj.points.empty()) mean_loss /= static_cast<double>(traj.points.size());

    std::cout << "steps: " << stats.steps << "\n"
              << "explanation outputs: " << stats.explain_outputs << "\n"
              << "model evaluations (explain): " << stats.explain_evals << "\n"
              << "mean prequential loss: " << mean_loss << "\n";
    if (!traj.points.empty()) {
        std::cout << "final importance:\n";
        const auto& phi = traj.points.back().phi;
        for (int i = 0; i < schema.dim(); ++i)
            std::cout << "  " << schema.feature(i).name << ": " << phi[static_cast<std::size_t>(i)]
                      << "\n";
    }
    std::cout << "trajectory written to " << a.out << "\n";
    return 0;
}

int cmd_gt(GtArgs& a) {
    GtExperimentConfig cfg;
    if (!a.config_path.empty()) cfg = GtExperimentConfig::load(a.config_path);
    if (a.scenario_given || a.config_path.empty()) cfg.scenario = a.scenario;
    if (a.reps_given || a.config_path.empty()) cfg.repetitions = a.reps;
    if (a.jobs_given) cfg.jobs = a.jobs;
    if (a.seed_given) {
        cfg.seed = a.seed;
        std::cout << "seed: " << cfg.seed << "\n";
    } else if (a.config_path.empty()) {
        cfg.seed = a.resolve_seed();
    } else {
        std::cout << "seed: " << cfg.seed << "\n";
    }
    cfg.validate();

    ErrorReport report = gt_experiment(cfg, &std::cerr, a.traj_dir);
    report.save(a.out);

    std::cout << "scenario " << report.scenario << " (p_switch " << report.p_switch << "), "
              << report.repetitions << " repetitions, stream length " << report.stream_length
              << "\n";
    std::printf("%-8s %-8s %-12s %-14s %-14s %-14s\n", "est", "window", "cost", "mse_mean",
                "mae_mean", "evals");
    for (const auto& c : report.cells)
        std::printf("%-8s %-8d %-12d %-14.6g %-14.6g %-14llu\n", c.estimator.c_str(), c.window,
                    c.cost_factor, c.mse_mean, c.mae_mean,
                    static_cast<unsigned long long>(c.explain_evals));
    std::cout << "report written to " << a.out << "\n";
    return 0;
}

int cmd_static_check(StaticArgs& a) {
    check_alpha(a.alpha);
    if (a.reps < 1) throw ConfigError("--reps must be >= 1");
    if (a.inner_samples < 1) throw ConfigError("--inner-samples must be >= 1");
    if (a.reservoir < 1) throw ConfigError("--reservoir must be >= 1");
    if (a.model.empty()) throw ConfigError("--model is required");

    const std::uint64_t seed = a.resolve_seed();
    RngHandle master(seed);
    const std::uint64_t stream_seed = master.next_u64();
    const std::uint64_t model_seed = master.next_u64();

    std::optional<StreamSchema> csv_schema;
    if (!a.schema_path.empty()) csv_schema = StreamSchema::load(a.schema_path);
    auto stream = stream_build(StreamSpecText{a.stream}, csv_schema, stream_seed);
    auto* csv = dynamic_cast<CsvStream*>(stream.get());
    if (!csv) throw ConfigError("static-check needs a csv stream (--stream csv,path=...)");
    const StreamSchema& schema = stream->schema();
    const int d = schema.dim();

    auto built = model_build(ModelSpec::parse(a.model), schema, model_seed);
    auto model = built->freeze();
    const LossFunction loss = loss_for(schema);

    std::vector<std::vector<double>> batch_runs, inc_runs;
    for (int r = 0; r < a.reps; ++r) {
        RngHandle rep_rng(master.next_u64());
        std::vector<LabeledSample> rows = csv->rows();
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[rep_rng.below(i)]);

        batch_runs.push_back(batch_sage(rows, *model, loss, a.inner_samples, rep_rng));

        ImportanceState state(d, schedule_from(a.alpha));
        auto strategy = RemovalStrategy::interventional(a.inner_samples, a.reservoir,
                                                        rep_rng.next_u64());
        for (const auto& s : rows) {
            if (strategy.initialized()) (void)isage_step(state, *model, strategy, loss, s.x, s.y, rep_rng);
            strategy.observe(s.x);
        }
        inc_runs.push_back(state.phi());
        std::cerr << "repetition " << (r + 1) << "/" << a.reps << " done\n";
    }

    bool pass = true;
    std::printf("%-16s %-14s %-14s %-14s %-14s %-6s\n", "feature", "batch_mean", "batch_std",
                "isage_mean", "|diff|", "ok");
    for (int i = 0; i < d; ++i) {
        double bm = 0.0, im = 0.0;
        for (int r = 0; r < a.reps; ++r) {
            bm += batch_runs[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
            im += inc_runs[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
        }
        bm /= a.reps;
        im /= a.reps;
        double bv = 0.0;
        for (int r = 0; r < a.reps; ++r) {
            const double dv = batch_runs[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] - bm;
            bv += dv * dv;
        }
        const double bs = a.reps > 1 ? std::sqrt(bv / (a.reps - 1)) : 0.0;
        const double diff = std::abs(im - bm);
        const bool ok = diff <= 3.0 * bs;
        pass = pass && ok;
        std::printf("%-16s %-14.6g %-14.6g %-14.6g %-14.6g %-6s\n",
                    schema.feature(i).name.c_str(), bm, bs, im, diff, ok ? "yes" : "NO");
    }
    std::cout << "static-check: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming Shapley-based feature importance"};
    app.require_subcommand(1);

    ExplainArgs ea;
    auto* explain = app.add_subcommand("explain", "Prequential explanation run over a stream");
    explain->add_option("--stream", ea.stream,
                        "Stream spec: agrawal:C | stagger:C | "
                        "drift,base=...,concepts=...,p=... | csv,path=...[,shuffle=1]")
        ->required();
    explain->add_option("--schema", ea.schema_path, "Schema JSON (csv streams)");
    explain->add_option("--model", ea.model,
                        "Model spec: hoeffding[,...] | sgd_logistic[,...] | sgd_linear[,...] | "
                        "constant:v1,... | file:PATH[,frozen]");
    explain->add_option("--estimator", ea.estimator, "isage | swsage");
    explain->add_option("--removal", ea.removal, "interventional | observational");
    explain->add_option("--alpha", ea.alpha, "Smoothing rate in (0,1); 0 = 1/t schedule");
    explain->add_option("--window", ea.window, "Window length (swsage)");
    explain->add_option("--stride", ea.stride, "Recompute stride (swsage); 0 = window/20");
    explain->add_option("--inner-samples", ea.inner_samples, "Replacement samples per prefix");
    explain->add_option("--reservoir", ea.reservoir, "Replacement store capacity");
    explain->add_option("--steps", ea.steps, "Stream steps to run");
    explain->add_option("--seed", ea.seed, "Master seed");
    explain->add_option("--out", ea.out, "Trajectory CSV path");

    GtArgs ga;
    auto* gt = app.add_subcommand("gt", "Drift ground-truth tracking experiment");
    gt->add_option("--scenario", ga.scenario, "high | middle | low");
    gt->add_option("--reps", ga.reps, "Repetitions");
    gt->add_option("--jobs", ga.jobs, "Parallel repetitions");
    gt->add_option("--seed", ga.seed, "Master seed");
    gt->add_option("--out", ga.out, "Report JSON path");
    gt->add_option("--config", ga.config_path, "Experiment config JSON");
    gt->add_option("--traj-dir", ga.traj_dir, "Directory for per-repetition trajectories");

    StaticArgs sa;
    auto* sc = app.add_subcommand("static-check",
                                  "Batch-equivalence check on a static dataset (frozen model)");
    sc->add_option("--stream", sa.stream, "csv,path=... stream spec")->required();
    sc->add_option("--schema", sa.schema_path, "Schema JSON");
    sc->add_option("--model", sa.model, "Model spec (frozen before the check)")->required();
    sc->add_option("--reps", sa.reps, "Repetitions");
    sc->add_option("--inner-samples", sa.inner_samples, "Replacement samples per prefix");
    sc->add_option("--reservoir", sa.reservoir, "Replacement store capacity");
    sc->add_option("--alpha", sa.alpha, "Smoothing rate; 0 = 1/t schedule (default)");
    sc->add_option("--seed", sa.seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    ea.seed_given = explain->count("--seed") > 0;
    ga.seed_given = gt->count("--seed") > 0;
    ga.scenario_given = gt->count("--scenario") > 0;
    ga.reps_given = gt->count("--reps") > 0;
    ga.jobs_given = gt->count("--jobs") > 0;
    sa.seed_given = sc->count("--seed") > 0;

    try {
        if (explain->parsed()) return cmd_explain(ea);
        if (gt->parsed()) return cmd_gt(ga);
        if (sc->parsed()) return cmd_static_check(sa);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
