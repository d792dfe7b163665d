#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "streamsage/streams.hpp"
#include "streamsage/tree.hpp"

using namespace streamsage;

namespace {

std::uint64_t all_features(const StreamSchema& s) {
    return s.dim() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s.dim()) - 1;
}

// Stream with three numeric features where feature 0 alone determines the
// binary label.
LabeledSample informative_sample(RngHandle& rng) {
    const double x0 = rng.uniform01();
    Instance x = testutil::numeric_instance({x0, rng.uniform01(), rng.uniform01()});
    return {std::move(x), Target::klass(x0 > 0.5 ? 1 : 0)};
}

double entropy(double p1) {
    double h = 0.0;
    for (double p : {p1, 1.0 - p1})
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

// Information gain of thresholding feature f at its midpoint, computed by
// direct counting; the oracle for which feature the root should split on.
double split_gain(const std::vector<LabeledSample>& data, int f, double threshold) {
    double n = 0, n1 = 0, nl = 0, nl1 = 0, nr = 0, nr1 = 0;
    for (const auto& s : data) {
        const bool pos = s.y.label() == 1;
        ++n;
        n1 += pos;
        if (s.x[static_cast<std::size_t>(f)].num() <= threshold) {
            ++nl;
            nl1 += pos;
        } else {
            ++nr;
            nr1 += pos;
        }
    }
    if (nl == 0 || nr == 0) return 0.0;
    return entropy(n1 / n) -
           (nl / n) * entropy(nl1 / nl) - (nr / n) * entropy(nr1 / nr);
}

} // namespace

TEST_SUITE("tree") {

TEST_CASE("one sample inside the grace period changes nothing") {
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    IncrementalTree tree(schema, TargetKind::klass, 2, TreeConfig{}, all_features(schema), 1);
    RngHandle rng(1);
    const LeafEvent ev = tree.learn_one(informative_sample(rng).x, Target::klass(0));
    CHECK(ev.empty());
    CHECK(tree.split_count() == 0);
    CHECK(tree.leaf_ids().size() == 1);
    tree.check_invariants();
}

TEST_CASE("root splits on the feature the information-gain oracle picks") {
    RngHandle rng(7);
    std::vector<LabeledSample> data;
    for (int i = 0; i < 10000; ++i) data.push_back(informative_sample(rng));

    // Oracle first: midpoint information gain singles out feature 0.
    const double g0 = split_gain(data, 0, 0.5);
    CHECK(g0 > split_gain(data, 1, 0.5) + 0.3);
    CHECK(g0 > split_gain(data, 2, 0.5) + 0.3);
    CHECK(g0 == doctest::Approx(std::log(2.0)).epsilon(0.05));

    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 200;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 3);
    for (const auto& s : data) tree.learn_one(s.x, s.y);

    const nlohmann::json root = tree.to_json().at("root");
    REQUIRE_FALSE(root.at("leaf").get<bool>());
    CHECK(root.at("feature").get<int>() == 0);
    CHECK(tree.split_count() >= 1);
    tree.check_invariants();
}

TEST_CASE("an exhausted split budget freezes the structure") {
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 100;
    cfg.max_splits = 1;
    cfg.adaptation = false;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 5);
    RngHandle rng(5);
    std::vector<std::uint64_t> leaves_after_split;
    for (int i = 0; i < 20000; ++i) {
        const LabeledSample s = informative_sample(rng);
        tree.learn_one(s.x, s.y);
        if (tree.split_count() == 1 && leaves_after_split.empty())
            leaves_after_split = tree.leaf_ids();
    }
    REQUIRE(tree.split_count() == 1);
    CHECK(tree.leaf_ids() == leaves_after_split);
    tree.check_invariants();
}

TEST_CASE("split events report created and destroyed leaves") {
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 100;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 11);
    RngHandle rng(11);
    const std::vector<std::uint64_t> before{tree.leaf_ids()};
    for (int i = 0; i < 20000; ++i) {
        const LabeledSample s = informative_sample(rng);
        const LeafEvent ev = tree.learn_one(s.x, s.y);
        if (ev.empty()) continue;
        REQUIRE(ev.destroyed.size() == 1);
        CHECK(ev.destroyed[0] == before[0]);
        REQUIRE(ev.created.size() >= 2);
        const auto now = tree.leaf_ids();
        for (auto id : ev.created)
            CHECK(std::find(now.begin(), now.end(), id) != now.end());
        CHECK(std::find(now.begin(), now.end(), ev.destroyed[0]) == now.end());
        return;
    }
    FAIL("no split happened in 20000 samples");
}

TEST_CASE("routing a single root leaf consumes no randomness") {
    const StreamSchema schema = testutil::numeric_schema(2, TargetKind::klass);
    IncrementalTree tree(schema, TargetKind::klass, 2, TreeConfig{}, all_features(schema), 1);
    tree.learn_one(testutil::numeric_instance({0.1, 0.2}), Target::klass(0));
    RngHandle rng(3), twin(3);
    const Instance x = testutil::numeric_instance({0.5, 0.5});
    const auto leaf = tree.route(x, FeatureSubset(2), rng);
    CHECK(leaf == tree.route_full(x));
    CHECK(rng.next_u64() == twin.next_u64());
}

TEST_CASE("routing with the split feature present is deterministic") {
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 100;
    cfg.max_splits = 1;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 9);
    RngHandle rng(9);
    for (int i = 0; i < 2000; ++i) {
        const LabeledSample s = informative_sample(rng);
        tree.learn_one(s.x, s.y);
    }
    REQUIRE(tree.split_count() == 1);

    const Instance left = testutil::numeric_instance({0.0, 0.5, 0.5});
    FeatureSubset present(3);
    present.add(0);
    RngHandle route_rng(4);
    const auto expect = tree.route_full(left);
    for (int i = 0; i < 100; ++i) CHECK(tree.route(left, present, route_rng) == expect);
}

TEST_CASE("absent split features route by visit counts") {
    // Build a root split, then route exactly 30 left and 70 right so the
    // child visit counts are (30, 70); the Monte-Carlo frequency of the left
    // child under an absent split feature must match 0.30.
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 100;
    cfg.max_splits = 1;
    cfg.adaptation = false;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 13);
    RngHandle rng(13);
    while (tree.split_count() == 0) {
        const LabeledSample s = informative_sample(rng);
        tree.learn_one(s.x, s.y);
    }
    const double threshold = tree.to_json().at("root").at("threshold").get<double>();
    REQUIRE(threshold > 0.0);
    REQUIRE(threshold < 1.0);

    // tally (30, 70): routed counts restart at the split
    const nlohmann::json before = tree.to_json();
    const auto base =
        before.at("root").at("child_counts").get<std::vector<std::uint64_t>>();
    for (int i = 0; i < 30; ++i)
        tree.learn_one(testutil::numeric_instance({threshold / 2.0, 0.5, 0.5}),
                       Target::klass(0));
    for (int i = 0; i < 70; ++i)
        tree.learn_one(testutil::numeric_instance({threshold + (1.0 - threshold) / 2.0, 0.5, 0.5}),
                       Target::klass(1));
    const auto counts = tree.to_json().at("root").at("child_counts").get<std::vector<std::uint64_t>>();
    REQUIRE(counts.size() == 2);
    REQUIRE(counts[0] - base[0] == 30);
    REQUIRE(counts[1] - base[1] == 70);
    const double p_left = static_cast<double>(counts[0]) /
                          static_cast<double>(counts[0] + counts[1]);

    const auto left_leaf = tree.route_full(testutil::numeric_instance({threshold / 2.0, 0.5, 0.5}));
    FeatureSubset absent(3); // feature 0 not present
    absent.add(1);
    absent.add(2);
    RngHandle route_rng(17);
    int lefts = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        lefts += tree.route(testutil::numeric_instance({0.0, 0.5, 0.5}), absent, route_rng) ==
                 left_leaf;
    CHECK(std::abs(static_cast<double>(lefts) / n - p_left) <= 0.01);
}

TEST_CASE("leaf predictions are class frequencies or running means") {
    const StreamSchema schema = testutil::numeric_schema(2, TargetKind::klass);
    IncrementalTree tree(schema, TargetKind::klass, 2, TreeConfig{}, all_features(schema), 1);
    const Instance x = testutil::numeric_instance({0.1, 0.2});
    CHECK_THROWS_AS(tree.predict(x), StateError);
    for (int i = 0; i < 5; ++i) tree.learn_one(x, Target::klass(1));
    const auto probs = tree.predict(x).probs();
    CHECK(probs[0] == 0.0);
    CHECK(probs[1] == 1.0);

    const StreamSchema rs = testutil::numeric_schema(2, TargetKind::real);
    IncrementalTree reg(rs, TargetKind::real, 0, TreeConfig{}, all_features(rs), 1);
    reg.learn_one(x, Target::real(2.0));
    reg.learn_one(x, Target::real(4.0));
    CHECK(reg.predict(x).value() == doctest::Approx(3.0));
}

TEST_CASE("prequential accuracy exceeds 0.9 on a deterministic concept") {
    StaggerStream stream(1, 99);
    IncrementalTree tree(stream.schema(), TargetKind::klass, 2, TreeConfig{},
                         all_features(stream.schema()), 7);
    std::uint64_t hits = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto rec = stream.next();
        if (tree.samples_seen() > 0) {
            const auto probs = tree.predict(rec->sample.x).probs();
            const int guess = probs[1] > probs[0] ? 1 : 0;
            hits += guess == rec->sample.y.label();
        }
        tree.learn_one(rec->sample.x, rec->sample.y);
    }
    CHECK(static_cast<double>(hits) / n > 0.9);
    tree.check_invariants();
}

TEST_CASE("structure bounds and invariants hold under heavy mixed training") {
    AgrawalStream stream(3, 123);
    TreeConfig cfg;
    cfg.max_depth = 4;
    cfg.max_splits = 12;
    IncrementalTree tree(stream.schema(), TargetKind::klass, 2, cfg,
                         all_features(stream.schema()), 21);
    for (int i = 0; i < 10000; ++i) {
        const auto rec = stream.next();
        tree.learn_one(rec->sample.x, rec->sample.y);
        if (i % 2500 == 0) tree.check_invariants();
    }
    CHECK(tree.depth() <= 4);
    CHECK(tree.split_count() <= 12);
    CHECK(tree.samples_seen() == 10000);
    tree.check_invariants();
}

TEST_CASE("ancestor leaf sets grow toward the whole tree") {
    const StreamSchema schema = testutil::numeric_schema(3, TargetKind::klass);
    TreeConfig cfg;
    cfg.grace_period = 100;
    IncrementalTree tree(schema, TargetKind::klass, 2, cfg, all_features(schema), 31);
    RngHandle rng(31);
    for (int i = 0; i < 8000; ++i) {
        const LabeledSample s = informative_sample(rng);
        tree.learn_one(s.x, s.y);
    }
    REQUIRE(tree.split_count() >= 1);
    const auto leaves = tree.leaf_ids();
    for (auto id : leaves) {
        const auto sets = tree.ancestor_leaf_sets(id);
        REQUIRE_FALSE(sets.empty());
        for (std::size_t k = 0; k < sets.size(); ++k) {
            CHECK(std::find(sets[k].begin(), sets[k].end(), id) != sets[k].end());
            if (k > 0)
                for (auto lid : sets[k - 1])
                    CHECK(std::find(sets[k].begin(), sets[k].end(), lid) != sets[k].end());
        }
        auto whole = sets.back();
        std::sort(whole.begin(), whole.end());
        CHECK(whole == leaves);
    }
}

TEST_CASE("JSON round-trip preserves structure and predictions") {
    AgrawalStream stream(1, 55);
    IncrementalTree tree(stream.schema(), TargetKind::klass, 2, TreeConfig{},
                         all_features(stream.schema()), 41);
    for (int i = 0; i < 6000; ++i) {
        const auto rec = stream.next();
        tree.learn_one(rec->sample.x, rec->sample.y);
    }
    const IncrementalTree copy = IncrementalTree::from_json(tree.to_json(), 999);
    CHECK(copy.leaf_ids() == tree.leaf_ids());
    CHECK(copy.split_count() == tree.split_count());
    CHECK(copy.samples_seen() == tree.samples_seen());
    copy.check_invariants();
    for (int i = 0; i < 200; ++i) {
        const auto rec = stream.next();
        CHECK(copy.predict(rec->sample.x) == tree.predict(rec->sample.x));
        CHECK(copy.route_full(rec->sample.x) == tree.route_full(rec->sample.x));
    }
}

} // TEST_SUITE
