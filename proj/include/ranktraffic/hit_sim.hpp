#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ranktraffic {

// Truncated power-law distribution of the relative hit set size h:
// S(h) = B h^-delta on [h_min, h_max], normalized to integrate to 1.
class HitSetDistribution {
public:
    HitSetDistribution(double delta, double h_min, double h_max);

    double delta() const { return delta_; }
    double h_min() const { return h_min_; }
    double h_max() const { return h_max_; }
    double normalization() const { return b_; }  // B

    double pdf(double h) const;
    double cdf(double h) const;
    // inverse CDF; u = 0 maps to h_min, u = 1 to h_max
    double quantile(double u) const;

private:
    double delta_;
    double h_min_;
    double h_max_;
    double b_;
};

inline double sample_hit_fraction(const HitSetDistribution& dist, double u) {
    return dist.quantile(u);
}

enum class CurveMode { exact, monte_carlo, convolved };

// Click probability per global rank R (index R-1). For Monte Carlo curves
// t is the per-query average of assigned click mass, so it sums to the
// fraction of queries with a non-empty hit list.
struct TrafficCurve {
    std::size_t n_pages = 0;  // N
    double alpha = 1.63;
    double h = -1.0;          // fixed relative hit set size; -1 for convolved
    // hit-set-size distribution parameters, set for convolved curves
    double delta = 0.0;
    double dist_h_min = 0.0;
    double dist_h_max = 0.0;
    std::uint64_t queries = 0;
    CurveMode mode = CurveMode::exact;
    std::vector<double> t;
    // per-rank second moment of the per-query contribution; empty for exact
    // curves. Standard error of t[i] is sqrt((t2[i]-t[i]^2)/queries).
    std::vector<double> t2;

    std::vector<double> rank_stderr() const;
};

struct SimOptions {
    std::uint64_t queries = 1'000'000;
    std::uint64_t seed = 0;
    int threads = 1;              // affects speed only, never results
    std::size_t display_cap = 1000;  // hits a search engine will display
    bool cap_enabled = true;
    bool page_grouped = false;    // group click mass by result page
    int page_size = 10;
};

// Probability that the page with global rank R sits at rank r of an n-hit
// list drawn by independent Bernoulli(h) selection over N pages. Computed
// in log space; combinatorially impossible configurations return 0.
double pr_rank_in_hitlist(std::size_t R, std::size_t r, std::size_t N,
                          std::size_t n, double h);

// Exact click probability of rank R: the double sum over hit-list sizes n
// and within-list ranks r of click mass times pr_rank_in_hitlist. Cost grows
// as N^2 per rank; refuses N > 10^4 (use monte_carlo_traffic instead).
double exact_click_prob(std::size_t R, std::size_t N, double h, double alpha);

// Full exact curve, sharing tables across ranks.
TrafficCurve exact_traffic(std::size_t N, double h, double alpha);

// Monte Carlo estimate: per query, draw the hit-list size n ~ Binomial(N,h),
// select n distinct ranks uniformly (distributionally identical to per-page
// Bernoulli(h)), and assign click mass r^-alpha / Z to the displayed hits.
// Deterministic for a fixed seed regardless of the thread count.
TrafficCurve monte_carlo_traffic(std::size_t N, double h, double alpha,
                                 const SimOptions& opt);

// Same per-query procedure with h sampled from `dist` each query; Monte
// Carlo evaluation of the convolution of t(R,N,h) with S(h).
TrafficCurve convolved_traffic(std::size_t N, const HitSetDistribution& dist,
                               double alpha, const SimOptions& opt);

struct CollapseResult {
    std::vector<double> x;                    // rescaled abscissa of common bins
    std::vector<std::vector<double>> curves;  // binned, rescaled ordinate per input
    std::vector<double> scale;                // per-curve multiplicative factor
    double max_deviation_dex = 0.0;           // worst log10 spread after rescaling
};

// Rescale curves of equal N to (R h, t/h) and report the maximum pairwise
// log10 deviation over the common support. Only bins fully inside every
// curve's support enter the comparison; partially covered boundary bins
// would be biased.
CollapseResult collapse_fixed_h(const std::vector<TrafficCurve>& curves,
                                int bins_per_decade = 10);

// Rescale abscissa to R/N, fit per-curve multiplicative factors f(N)
// against the largest-N curve by least squares in log space, and report the
// residual deviation. scale[i] is the factor applied to curve i. The top
// ranks R <= 3/h_max sit on the finite-h_max plateau, which is a function
// of R rather than R/N; curves carrying hit-set metadata have that region
// excluded before binning.
CollapseResult collapse_over_n(const std::vector<TrafficCurve>& curves,
                               int bins_per_decade = 10);

}  // namespace ranktraffic
