// Microbenchmarks for the hot paths: incremental explanation steps, tree
// learning and routing, reservoir maintenance, and batch recomputation.

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "streamsage/batch_sage.hpp"
#include "streamsage/isage.hpp"
#include "streamsage/model.hpp"
#include "streamsage/streams.hpp"

namespace {

using namespace streamsage;

std::vector<LabeledSample> sample_ring(int n, std::uint64_t seed) {
    AgrawalStream stream(1, seed);
    std::vector<LabeledSample> ring;
    ring.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ring.push_back(stream.next()->sample);
    return ring;
}

std::unique_ptr<SgdModel> trained_model(std::uint64_t seed) {
    AgrawalStream stream(1, seed);
    auto model = SgdModel::logistic(stream.schema(), 0.05, true);
    for (int i = 0; i < 2000; ++i) model->learn_one(stream.next()->sample);
    return model;
}

void BM_IsageStep(benchmark::State& st) {
    const bool conditional = st.range(0) != 0;
    const StreamSchema schema = AgrawalStream::make_schema();
    const auto ring = sample_ring(512, 1);
    const auto model = trained_model(2);
    auto strat = conditional
                     ? RemovalStrategy::observational(1, schema, 100, TreeConfig{}, 3)
                     : RemovalStrategy::interventional(1, 100, 3);
    for (const auto& s : ring) strat.observe(s.x);
    ImportanceState state(schema.dim(), AlphaSchedule::constant(0.001));
    const LossFunction loss = LossFunction::cross_entropy();
    RngHandle rng(4);
    std::size_t k = 0;
    for (auto _ : st) {
        const auto& s = ring[k++ & 511];
        benchmark::DoNotOptimize(isage_step(state, *model, strat, loss, s.x, s.y, rng));
    }
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_IsageStep)->Arg(0)->Arg(1)->ArgNames({"conditional"});

void BM_TreeLearn(benchmark::State& st) {
    const auto ring = sample_ring(4096, 5);
    HoeffdingTreeModel model(AgrawalStream::make_schema(), TreeConfig{}, 6);
    std::size_t k = 0;
    for (auto _ : st) {
        model.learn_one(ring[k++ & 4095]);
        benchmark::DoNotOptimize(model);
    }
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_TreeLearn);

void BM_TreeRoute(benchmark::State& st) {
    const auto ring = sample_ring(4096, 7);
    HoeffdingTreeModel model(AgrawalStream::make_schema(), TreeConfig{}, 8);
    AgrawalStream train(1, 9);
    for (int i = 0; i < 20000; ++i) model.learn_one(train.next()->sample);
    std::size_t k = 0;
    for (auto _ : st) benchmark::DoNotOptimize(model.predict(ring[k++ & 4095].x));
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_TreeRoute);

void BM_ReservoirUpdate(benchmark::State& st) {
    const auto ring = sample_ring(1024, 10);
    GeometricReservoir res(100);
    RngHandle rng(11);
    std::size_t k = 0;
    for (auto _ : st) {
        res.update(ring[k++ & 1023].x, rng);
        benchmark::DoNotOptimize(res);
    }
    st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_ReservoirUpdate);

void BM_BatchRecompute(benchmark::State& st) {
    const auto window = sample_ring(static_cast<int>(st.range(0)), 12);
    const auto model = trained_model(13);
    const LossFunction loss = LossFunction::cross_entropy();
    RngHandle rng(14);
    for (auto _ : st) benchmark::DoNotOptimize(batch_sage(window, *model, loss, 1, rng));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_BatchRecompute)->Arg(100)->Arg(500);

} // namespace

BENCHMARK_MAIN();
