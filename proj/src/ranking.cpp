#include "ranktraffic/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ranktraffic {

RankTable build_rank_table(std::span<const double> scores) {
    for (double s : scores)
        if (std::isnan(s))
            throw std::invalid_argument("build_rank_table: NaN score");
    RankTable table;
    table.n = scores.size();
    table.order.resize(table.n);
    std::iota(table.order.begin(), table.order.end(), 0u);
    std::stable_sort(table.order.begin(), table.order.end(),
                     [&scores](std::uint32_t a, std::uint32_t b) {
                         if (scores[a] != scores[b]) return scores[a] > scores[b];
                         return a < b;
                     });
    table.rank_of.resize(table.n);
    for (std::size_t r = 0; r < table.n; ++r)
        table.rank_of[table.order[r]] = static_cast<std::uint32_t>(r + 1);
    return table;
}

FitResult rank_vs_score_exponent(const RankTable& table,
                                 std::span<const double> scores,
                                 double fit_low, double fit_high,
                                 int bins_per_decade) {
    if (scores.size() != table.n)
        throw std::invalid_argument("rank_vs_score_exponent: size mismatch");
    std::vector<double> p, r;
    for (std::size_t i = 0; i < table.n; ++i) {
        if (!(scores[i] > 0.0)) continue;
        p.push_back(scores[i]);
        r.push_back(static_cast<double>(table.rank_of[i]));
    }
    const BinnedCurve binned = log_bin(p, r, bins_per_decade);
    FitResult fit = fit_power_law(binned, fit_low, fit_high);
    fit.exponent = -fit.exponent;  // report beta, the magnitude of the slope
    return fit;
}

double rank_to_indegree(double rank, std::size_t n_pages, double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("rank_to_indegree: beta must be positive");
    if (!(rank >= 1.0) || rank > static_cast<double>(n_pages))
        throw std::out_of_range("rank_to_indegree: rank out of [1, N]");
    return std::pow(static_cast<double>(n_pages) / rank, 1.0 / beta);
}

}  // namespace ranktraffic
