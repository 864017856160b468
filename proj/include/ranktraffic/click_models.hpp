#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ranktraffic {

// The paper's measured constants, as model defaults.
struct ModelParams {
    double alpha = 1.63;    // click probability vs result rank
    double beta = 1.1;      // rank vs PageRank
    double mu = 2.1;        // PageRank / in-degree pdf exponent
    double delta = 1.1;     // hit-set-size pdf exponent
    double damping = 0.85;
    std::size_t index_size = 0;  // N
    int page_size = 10;          // hits per result page

    void validate() const;  // throws std::invalid_argument
};

// Prefix sums of the generalized harmonic series: Z(n) = sum_{m=1..n} m^-alpha.
class ZipfNorm {
public:
    ZipfNorm(std::size_t max_n, double alpha);
    double operator()(std::size_t n) const { return prefix_[n]; }
    std::size_t max_n() const { return prefix_.size() - 1; }

private:
    std::vector<double> prefix_;
};

// Surfing model: t_i proportional to in-degree, normalized to sum 1.
std::vector<double> surfing_traffic(std::span<const std::uint32_t> in_degrees);

// Click probability r^-alpha / Z(n) of the hit at rank r in a list of n hits.
double click_prob_from_rank(std::size_t r, std::size_t n, double alpha);

// Click mass assigned per result page of `page_size` hits, spread uniformly
// within the page. page_size = 1 reduces to click_prob_from_rank.
double page_grouped_click_prob(std::size_t r, std::size_t n, double alpha,
                               int page_size);

// Naive searching model: t_i proportional to k_i^(alpha*beta).
std::vector<double> naive_search_traffic(std::span<const std::uint32_t> in_degrees,
                                         double alpha, double beta);

// lambda * surf + (1 - lambda) * search
std::vector<double> mixture_traffic(std::span<const double> surf,
                                    std::span<const double> search, double lambda);

}  // namespace ranktraffic
