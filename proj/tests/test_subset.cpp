#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "streamsage/subset.hpp"

using namespace streamsage;

TEST_SUITE("subset") {

TEST_CASE("bit-set operations") {
    CHECK_THROWS_AS(FeatureSubset(0), ConfigError);
    CHECK_THROWS_AS(FeatureSubset(64), ConfigError);

    FeatureSubset s(4);
    CHECK(s.empty());
    CHECK(s.count() == 0);
    s.add(1);
    s.add(3);
    CHECK(s.count() == 2);
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(0));
    CHECK(s.members() == std::vector<int>{1, 3});
    CHECK(s.complement_members() == std::vector<int>{0, 2});
    s.remove(3);
    CHECK(s.members() == std::vector<int>{1});
    CHECK_THROWS_AS(s.add(4), ConfigError);
    CHECK_THROWS_AS(s.contains(-1), ConfigError);

    CHECK(FeatureSubset::full(3).is_full());
    CHECK(FeatureSubset::full(3).count() == 3);
    CHECK(FeatureSubset::from_bits(3, 0b101).members() == std::vector<int>{0, 2});
    CHECK_THROWS_AS(FeatureSubset::from_bits(3, 0b1000), ConfigError);
    CHECK(FeatureSubset::full(63).count() == 63);
}

TEST_CASE("d=1 has only one permutation") {
    RngHandle rng(1);
    CHECK(sample_permutation(1, rng) == Permutation{0});
    CHECK_THROWS_AS(sample_permutation(0, rng), ConfigError);
}

TEST_CASE("permutations are uniform over orderings") {
    // Oracle: all 6 orderings of d=3 are equally likely; a chi-square
    // goodness-of-fit bound (df 5, p 0.999 quantile 20.52) plus a per-cell
    // frequency band of 1/6 +- 0.01 over 60000 draws.
    RngHandle rng(2024);
    std::map<Permutation, std::uint64_t> hist;
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++hist[sample_permutation(3, rng)];
    REQUIRE(hist.size() == 6);
    std::vector<std::uint64_t> counts;
    for (const auto& [pi, c] : hist) {
        counts.push_back(c);
        CHECK(static_cast<double>(c) / n == doctest::Approx(1.0 / 6.0).epsilon(0.06));
        CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 6.0) <= 0.01);
    }
    CHECK(testutil::chi_square(counts, std::vector<double>(6, 1.0 / 6.0)) < 20.52);
}

TEST_CASE("permutation sampling is deterministic under a fixed seed") {
    RngHandle a(9), b(9);
    for (int i = 0; i < 50; ++i) CHECK(sample_permutation(2, a) == sample_permutation(2, b));
    RngHandle c(9), d(10);
    bool differs = false;
    for (int i = 0; i < 50; ++i)
        differs = differs || sample_permutation(5, c) != sample_permutation(5, d);
    CHECK(differs);
}

TEST_CASE("preceding sets unroll the permutation definition") {
    const Permutation pi{2, 0, 1};

    auto [m0, p0] = preceding_sets(pi, 0);
    CHECK(m0.members() == std::vector<int>{2});
    CHECK(p0.members() == std::vector<int>{0, 2});

    auto [m2, p2] = preceding_sets(pi, 2);
    CHECK(m2.empty());
    CHECK(p2.members() == std::vector<int>{2});

    auto [m1, p1] = preceding_sets(pi, 1);
    CHECK(p1.is_full());
    CHECK(m1.members() == std::vector<int>{0, 2});
}

TEST_CASE("preceding sets reject malformed input") {
    CHECK_THROWS_AS(preceding_sets({0, 0, 1}, 0), ConfigError);
    CHECK_THROWS_AS(preceding_sets({0, 3, 1}, 0), ConfigError);
    CHECK_THROWS_AS(preceding_sets({0, 1, 2}, 3), ConfigError);
    CHECK_THROWS_AS(preceding_sets({}, 0), ConfigError);
}

} // TEST_SUITE
