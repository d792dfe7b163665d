#include "streamsage/gt.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "streamsage/batch_sage.hpp"
#include "streamsage/isage.hpp"

namespace streamsage {

double GtExperimentConfig::p_switch() const {
    if (scenario == "high") return 0.0005;
    if (scenario == "middle") return 0.0002;
    if (scenario == "low") return 0.0001;
    throw ConfigError("scenario must be high, middle, or low");
}

void GtExperimentConfig::validate() const {
    (void)p_switch();
    if (concepts.empty()) throw ConfigError("need at least one concept");
    for (int c : concepts)
        if (c < 1 || c > 6) throw ConfigError("concepts must be in 1..6");
    if (pretrain_samples < 1) throw ConfigError("pretrain_samples must be >= 1");
    if (gt_inner_samples < 1) throw ConfigError("gt_inner_samples must be >= 1");
    if (windows.empty()) throw ConfigError("need at least one window size");
    for (int w : windows)
        if (w < 2) throw ConfigError("window sizes must be >= 2");
    for (int c : sw_cost_factors)
        if (c < 1) throw ConfigError("cost factors must be >= 1");
    if (inner_samples < 1) throw ConfigError("inner_samples must be >= 1");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (reservoir_capacity < 1) throw ConfigError("reservoir_capacity must be >= 1");
    (void)ModelSpec::parse(model);
}

nlohmann::json GtExperimentConfig::to_json() const {
    return {{"scenario", scenario},
            {"concepts", concepts},
            {"pretrain_samples", pretrain_samples},
            {"gt_inner_samples", gt_inner_samples},
            {"windows", windows},
            {"sw_cost_factors", sw_cost_factors},
            {"inner_samples", inner_samples},
            {"stream_length", stream_length},
            {"repetitions", repetitions},
            {"seed", seed},
            {"jobs", jobs},
            {"reservoir_capacity", reservoir_capacity},
            {"model", model}};
}

GtExperimentConfig GtExperimentConfig::from_json(const nlohmann::json& j) {
    GtExperimentConfig cfg;
    try {
        cfg.scenario = j.value("scenario", cfg.scenario);
        cfg.concepts = j.value("concepts", cfg.concepts);
        cfg.pretrain_samples = j.value("pretrain_samples", cfg.pretrain_samples);
        cfg.gt_inner_samples = j.value("gt_inner_samples", cfg.gt_inner_samples);
        cfg.windows = j.value("windows", cfg.windows);
        cfg.sw_cost_factors = j.value("sw_cost_factors", cfg.sw_cost_factors);
        cfg.inner_samples = j.value("inner_samples", cfg.inner_samples);
        cfg.stream_length = j.value("stream_length", cfg.stream_length);
        cfg.repetitions = j.value("repetitions", cfg.repetitions);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.jobs = j.value("jobs", cfg.jobs);
        cfg.reservoir_capacity = j.value("reservoir_capacity", cfg.reservoir_capacity);
        cfg.model = j.value("model", cfg.model);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

GtExperimentConfig GtExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

nlohmann::json ErrorReport::to_json() const {
    nlohmann::json cells_json = nlohmann::json::array();
    for (const auto& c : cells)
        cells_json.push_back({{"estimator", c.estimator},
                              {"window", c.window},
                              {"cost_factor", c.cost_factor},
                              {"mse_mean", c.mse_mean},
                              {"mse_std", c.mse_std},
                              {"mae_mean", c.mae_mean},
                              {"mae_std", c.mae_std},
                              {"explain_evals", c.explain_evals}});
    return {{"format", "streamsage.error_report"},
            {"version", 1},
            {"scenario", scenario},
            {"p_switch", p_switch},
            {"repetitions", repetitions},
            {"stream_length", stream_length},
            {"cells", cells_json}};
}

ErrorReport ErrorReport::from_json(const nlohmann::json& j) {
    ErrorReport r;
    try {
        if (j.at("format").get<std::string>() != "streamsage.error_report")
            throw ParseError("not an error-report document");
        if (j.at("version").get<int>() != 1)
            throw ParseError("unsupported error-report version");
        r.scenario = j.at("scenario").get<std::string>();
        r.p_switch = j.at("p_switch").get<double>();
        r.repetitions = j.at("repetitions").get<int>();
        r.stream_length = j.at("stream_length").get<std::uint64_t>();
        for (const auto& cj : j.at("cells")) {
            ErrorCell c;
            c.estimator = cj.at("estimator").get<std::string>();
            c.window = cj.at("window").get<int>();
            c.cost_factor = cj.at("cost_factor").get<int>();
            c.mse_mean = cj.at("mse_mean").get<double>();
            c.mse_std = cj.at("mse_std").get<double>();
            c.mae_mean = cj.at("mae_mean").get<double>();
            c.mae_std = cj.at("mae_std").get<double>();
            c.explain_evals = cj.at("explain_evals").get<std::uint64_t>();
            r.cells.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed error report: ") + e.what());
    }
    return r;
}

void ErrorReport::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << to_json().dump(2) << '\n';
    if (!out) throw ParseError("failed writing '" + path + "'");
}

const ErrorCell& ErrorReport::cell(const std::string& estimator, int window,
                                   int cost_factor) const {
    for (const auto& c : cells)
        if (c.estimator == estimator && c.window == window && c.cost_factor == cost_factor)
            return c;
    throw ConfigError("no such report cell: " + estimator + "/" + std::to_string(window) + "/" +
                      std::to_string(cost_factor));
}

namespace {

struct CellKey {
    std::string estimator;
    int window;
    int cost_factor;
};

struct CellSample {
    double mse = 0.0;
    double mae = 0.0;
    std::uint64_t evals = 0;
};

struct RepSeeds {
    std::vector<std::uint64_t> pretrain_stream, model, gt;
    std::uint64_t drift = 0;
    std::vector<std::uint64_t> run; // one per cell, cell order
};

// Fixed derivation order, so results do not depend on scheduling.
RepSeeds derive_seeds(std::uint64_t rep_seed, std::size_t concepts, std::size_t cells) {
    RngHandle rng(rep_seed);
    RepSeeds s;
    for (std::size_t i = 0; i < concepts; ++i) {
        s.pretrain_stream.push_back(rng.next_u64());
        s.model.push_back(rng.next_u64());
        s.gt.push_back(rng.next_u64());
    }
    s.drift = rng.next_u64();
    for (std::size_t i = 0; i < cells; ++i) s.run.push_back(rng.next_u64());
    return s;
}

// Reference importance per concept plus the frozen model that produced it.
struct ConceptGt {
    std::shared_ptr<const Model> model;
    std::vector<double> phi;
};

// Per-step estimate trajectory scored against the piecewise-constant
// reference given by each step's active concept.
CellSample score_per_step(const std::vector<std::vector<double>>& est,
                          const std::vector<int>& concept_at,
                          const std::map<int, ConceptGt>& gt, int d, std::uint64_t evals) {
    CellSample out;
    out.evals = evals;
    double se = 0.0, ae = 0.0;
    std::uint64_t cells = 0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        const std::vector<double>& g = gt.at(concept_at[k]).phi;
        for (int i = 0; i < d; ++i) {
            const double dv = est[k][static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
            se += dv * dv;
            ae += std::abs(dv);
            ++cells;
        }
    }
    if (cells > 0) {
        out.mse = se / static_cast<double>(cells);
        out.mae = ae / static_cast<double>(cells);
    }
    return out;
}

void export_gt_trajectory(const std::string& dir, const std::string& name,
                          const StreamSchema& schema,
                          const std::vector<std::vector<double>>& est,
                          const std::vector<int>& concept_at, std::uint64_t first_t) {
    Trajectory traj;
    traj.dim = schema.dim();
    for (std::size_t k = 0; k < est.size(); ++k) {
        TrajectoryPoint p;
        p.t = first_t + k;
        p.loss = 0.0;
        p.concept_id = concept_at[k];
        p.warmup = false;
        p.phi = est[k];
        traj.points.push_back(std::move(p));
    }
    export_trajectory(traj, schema, dir + "/" + name + ".csv");
}

} // namespace

ErrorReport gt_experiment(const GtExperimentConfig& cfg, std::ostream* progress,
                          const std::string& traj_dir) {
    cfg.validate();
    const LossFunction loss = LossFunction::cross_entropy();
    const StreamSchema schema = AgrawalStream::make_schema();
    const int d = schema.dim();

    // Cell layout: per window first the incremental estimator, then the
    // window estimator at each cost factor.
    std::vector<CellKey> keys;
    for (int w : cfg.windows) {
        keys.push_back({"isage", w, 0});
        for (int f : cfg.sw_cost_factors) keys.push_back({"sw", w, f});
    }

    std::vector<std::uint64_t> rep_seeds;
    {
        RngHandle master(cfg.seed);
        for (int r = 0; r < cfg.repetitions; ++r) rep_seeds.push_back(master.next_u64());
    }

    std::vector<std::vector<CellSample>> results(
        static_cast<std::size_t>(cfg.repetitions),
        std::vector<CellSample>(keys.size()));
    std::mutex progress_mutex;

    auto run_rep = [&](int rep) {
        const RepSeeds seeds = derive_seeds(rep_seeds[static_cast<std::size_t>(rep)],
                                            cfg.concepts.size(), keys.size());

        // Frozen per-concept models and their reference importance.
        std::map<int, ConceptGt> gt;
        for (std::size_t ci = 0; ci < cfg.concepts.size(); ++ci) {
            const int concept_id = cfg.concepts[ci];
            AgrawalStream gen(concept_id, seeds.pretrain_stream[ci]);
            auto model = model_build(ModelSpec::parse(cfg.model), schema, seeds.model[ci]);
            std::vector<LabeledSample> data;
            data.reserve(static_cast<std::size_t>(cfg.pretrain_samples));
            for (int n = 0; n < cfg.pretrain_samples; ++n) {
                auto rec = gen.next();
                model->learn_one(rec->sample);
                data.push_back(std::move(rec->sample));
            }
            ConceptGt entry;
            entry.model = model->freeze();
            RngHandle gt_rng(seeds.gt[ci]);
            entry.phi = batch_sage(data, *entry.model, loss, cfg.gt_inner_samples, gt_rng);
            gt.emplace(concept_id, std::move(entry));
        }

        // One drift realization shared by every estimator of this repetition.
        std::vector<StreamRecord> stream;
        stream.reserve(cfg.stream_length);
        {
            RngHandle seeder(seeds.drift);
            std::vector<std::unique_ptr<StreamSource>> subs;
            for (int c : cfg.concepts)
                subs.push_back(std::make_unique<AgrawalStream>(c, seeder.next_u64()));
            DriftComposer composer(std::move(subs), cfg.p_switch(), seeder.next_u64());
            for (std::uint64_t t = 0; t < cfg.stream_length; ++t)
                stream.push_back(*composer.next());
        }

        for (std::size_t k = 0; k < keys.size(); ++k) {
            const CellKey& key = keys[k];
            const std::uint64_t warmup_until = std::max<std::uint64_t>(
                {2, static_cast<std::uint64_t>(cfg.reservoir_capacity),
                 static_cast<std::uint64_t>(key.window)});
            if (cfg.stream_length <= warmup_until) continue; // nothing scored

            RngHandle run_rng(seeds.run[k]);
            std::map<int, CountingModel> counted;
            for (const auto& [cid, entry] : gt) counted.emplace(cid, CountingModel(*entry.model));

            std::vector<std::vector<double>> est; // per scored step
            std::vector<int> concept_at;
            const std::uint64_t first_scored_t = warmup_until + 1;

            if (key.estimator == "isage") {
                const double alpha = 2.0 / (static_cast<double>(key.window) + 1.0);
                ImportanceState state(d, AlphaSchedule::constant(alpha));
                auto strategy = RemovalStrategy::interventional(
                    cfg.inner_samples, cfg.reservoir_capacity, run_rng.next_u64());
                for (std::uint64_t t = 1; t <= cfg.stream_length; ++t) {
                    const StreamRecord& rec = stream[t - 1];
                    CountingModel& model = counted.at(rec.concept_id);
                    if (strategy.initialized())
                        (void)isage_step(state, model, strategy, loss, rec.sample.x,
                                         rec.sample.y, run_rng);
                    if (t >= first_scored_t) {
                        est.push_back(state.phi());
                        concept_at.push_back(rec.concept_id);
                    }
                    strategy.observe(rec.sample.x);
                }
            } else {
                const int stride = std::max(1, key.window / key.cost_factor);
                WindowBuffer buf(key.window);
                std::vector<double> last(static_cast<std::size_t>(d), 0.0);
                for (std::uint64_t t = 1; t <= cfg.stream_length; ++t) {
                    const StreamRecord& rec = stream[t - 1];
                    CountingModel& model = counted.at(rec.concept_id);
                    auto out = swsage_step(buf, rec.sample, model, loss, cfg.inner_samples,
                                           stride, run_rng);
                    if (out) last = std::move(*out);
                    if (t >= first_scored_t) {
                        // Outputs are held constant between recomputations.
                        est.push_back(last);
                        concept_at.push_back(rec.concept_id);
                    }
                }
            }

            std::uint64_t evals = 0;
            for (const auto& [cid, counter] : counted) evals += counter.predict_calls();
            results[static_cast<std::size_t>(rep)][k] =
                score_per_step(est, concept_at, gt, d, evals);

            if (!traj_dir.empty()) {
                const std::string name = "traj_rep" + std::to_string(rep) + "_" + key.estimator +
                                         "_w" + std::to_string(key.window) +
                                         (key.cost_factor > 0
                                              ? "_c" + std::to_string(key.cost_factor)
                                              : "");
                export_gt_trajectory(traj_dir, name, schema, est, concept_at, first_scored_t);
            }
        }

        if (progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            *progress << "repetition " << (rep + 1) << "/" << cfg.repetitions << " done\n";
        }
    };

    if (cfg.jobs <= 1 || cfg.repetitions == 1) {
        for (int r = 0; r < cfg.repetitions; ++r) run_rep(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min(cfg.jobs, cfg.repetitions);
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int r = next.fetch_add(1); r < cfg.repetitions; r = next.fetch_add(1))
                        run_rep(r);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    ErrorReport report;
    report.scenario = cfg.scenario;
    report.p_switch = cfg.p_switch();
    report.repetitions = cfg.repetitions;
    report.stream_length = cfg.stream_length;

    const std::uint64_t min_warmup =
        std::max<std::uint64_t>(2, static_cast<std::uint64_t>(cfg.reservoir_capacity));
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::uint64_t warmup_until =
            std::max<std::uint64_t>(min_warmup, static_cast<std::uint64_t>(keys[k].window));
        if (cfg.stream_length <= warmup_until) continue; // cell never scored
        ErrorCell cell;
        cell.estimator = keys[k].estimator;
        cell.window = keys[k].window;
        cell.cost_factor = keys[k].cost_factor;
        double mse_sum = 0.0, mae_sum = 0.0;
        for (const auto& rep : results) {
            mse_sum += rep[k].mse;
            mae_sum += rep[k].mae;
        }
        const double n = static_cast<double>(cfg.repetitions);
        cell.mse_mean = mse_sum / n;
        cell.mae_mean = mae_sum / n;
        double mse_var = 0.0, mae_var = 0.0;
        for (const auto& rep : results) {
            mse_var += (rep[k].mse - cell.mse_mean) * (rep[k].mse - cell.mse_mean);
            mae_var += (rep[k].mae - cell.mae_mean) * (rep[k].mae - cell.mae_mean);
        }
        if (cfg.repetitions > 1) {
            cell.mse_std = std::sqrt(mse_var / (n - 1.0));
            cell.mae_std = std::sqrt(mae_var / (n - 1.0));
        }
        cell.explain_evals = results.front()[k].evals;
        report.cells.push_back(std::move(cell));
    }
    return report;
}

} // namespace streamsage
