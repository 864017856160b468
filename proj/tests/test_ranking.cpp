#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ranktraffic/ranking.hpp"
#include "ranktraffic/rng.hpp"

using namespace ranktraffic;

TEST_CASE("rank table sorts by descending score") {
    const std::vector<double> scores{0.2, 0.5, 0.3};
    const RankTable table = build_rank_table(scores);
    CHECK(table.order == std::vector<std::uint32_t>{1, 2, 0});
    CHECK(table.rank_of == std::vector<std::uint32_t>{3, 1, 2});
}

TEST_CASE("ties break by ascending node id") {
    const std::vector<double> scores{0.5, 0.5, 0.5, 0.5};
    const RankTable table = build_rank_table(scores);
    CHECK(table.order == std::vector<std::uint32_t>{0, 1, 2, 3});
}

TEST_CASE("order and rank_of are inverse permutations") {
    SplitMix64 rng(5);
    std::vector<double> scores(500);
    for (double& s : scores) s = rng.uniform01();
    const RankTable table = build_rank_table(scores);
    for (std::size_t r = 1; r <= table.n; ++r)
        CHECK(table.rank_of[table.order[r - 1]] == r);
    for (std::size_t r = 2; r <= table.n; ++r)
        CHECK(scores[table.order[r - 1]] <= scores[table.order[r - 2]]);
}

TEST_CASE("NaN scores are rejected") {
    const std::vector<double> scores{0.1, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(build_rank_table(scores), std::invalid_argument);
}

TEST_CASE("ranking is invariant under positive rescaling") {
    SplitMix64 rng(6);
    std::vector<double> scores(200), scaled(200);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = rng.uniform01();
        scaled[i] = 7.25 * scores[i];
    }
    CHECK(build_rank_table(scores).order == build_rank_table(scaled).order);
}

TEST_CASE("deterministic scores recover the constructed exponent") {
    const double beta0 = 1.4;
    const std::size_t n = 100'000;
    std::vector<double> scores(n);
    for (std::size_t r = 1; r <= n; ++r)
        scores[r - 1] = std::pow(static_cast<double>(r), -1.0 / beta0);
    const RankTable table = build_rank_table(scores);
    const FitResult fit =
        rank_vs_score_exponent(table, scores, scores[n - 1], scores[0]);
    CHECK(fit.exponent == doctest::Approx(beta0).epsilon(1e-6));
}

TEST_CASE("pareto samples with pdf exponent three give beta two") {
    // pdf ~ p^-3 on [1, inf): inverse CDF p = (1-u)^(-1/2)
    const std::size_t n = 200'000;
    SplitMix64 rng(77);
    std::vector<double> scores(n);
    for (double& s : scores) s = std::pow(1.0 - rng.uniform01(), -0.5);
    const RankTable table = build_rank_table(scores);
    // fit the well-populated score range, away from the noisy extreme tail
    const FitResult fit = rank_vs_score_exponent(table, scores, 1.5, 30.0);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("rank_vs_score_exponent refuses sparse fit ranges") {
    const std::vector<double> scores{1.0, 2.0, 3.0};
    const RankTable table = build_rank_table(scores);
    CHECK_THROWS_AS(rank_vs_score_exponent(table, scores, 1.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("rank to in-degree calibration and slope") {
    CHECK(rank_to_indegree(1000.0, 1000, 1.1) == doctest::Approx(1.0));
    CHECK(rank_to_indegree(1.0, 1'000'000, 1.1) ==
          doctest::Approx(std::pow(10.0, 6.0 / 1.1)).epsilon(1e-12));
    // log k vs log R has slope exactly -1/beta
    const double beta = 1.3;
    const double slope =
        (std::log(rank_to_indegree(100.0, 10'000, beta)) -
         std::log(rank_to_indegree(10.0, 10'000, beta))) /
        (std::log(100.0) - std::log(10.0));
    CHECK(slope == doctest::Approx(-1.0 / beta).epsilon(1e-12));
}

TEST_CASE("rank_to_indegree is strictly decreasing in rank") {
    double prev = INFINITY;
    for (double r = 1.0; r <= 1000.0; r += 7.0) {
        const double k = rank_to_indegree(r, 1000, 1.1);
        CHECK(k < prev);
        prev = k;
    }
}

TEST_CASE("rank_to_indegree validates its arguments") {
    CHECK_THROWS_AS(rank_to_indegree(0.5, 100, 1.1), std::out_of_range);
    CHECK_THROWS_AS(rank_to_indegree(101.0, 100, 1.1), std::out_of_range);
    CHECK_THROWS_AS(rank_to_indegree(10.0, 100, 0.0), std::invalid_argument);
}
