#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ranktraffic/analysis.hpp"

namespace ranktraffic {

// Pages sorted by descending score. Ranks are 1-based: rank 1 is the page
// with the largest score. Ties break by ascending node id.
struct RankTable {
    std::vector<std::uint32_t> order;    // order[R-1] = node with global rank R
    std::vector<std::uint32_t> rank_of;  // rank_of[node] = R
    std::size_t n = 0;
};

// throws on NaN scores
RankTable build_rank_table(std::span<const double> scores);

// Fitted exponent beta of R ~ p^(-beta) from log-binned OLS over scores in
// [fit_low, fit_high]. For scores with pdf exponent -mu, expect beta = mu - 1.
FitResult rank_vs_score_exponent(const RankTable& table,
                                 std::span<const double> scores,
                                 double fit_low, double fit_high,
                                 int bins_per_decade = 10);

// k(R) = (N/R)^(1/beta), calibrated so k(N) = 1.
double rank_to_indegree(double rank, std::size_t n_pages, double beta);

}  // namespace ranktraffic
