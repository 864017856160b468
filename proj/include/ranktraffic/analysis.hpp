#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ranktraffic {

// Curve averaged over geometric bins. Bin edges are anchored at powers of
// ten (edge i at 10^(i/bins_per_decade)), so curves binned with the same
// bins_per_decade share a grid and can be compared bin by bin.
struct BinnedCurve {
    std::vector<int> bin_index;     // anchored index, floor(bpd * log10 x)
    std::vector<double> center;     // mean x of the bin
    std::vector<double> mean;
    std::vector<double> stderr_of_mean;
    std::vector<std::size_t> count;
    // per-bin means of log10 x and log10 y; geometric means preserve exact
    // power laws, so fits recover exponents exactly. NaN for bins holding
    // any nonpositive y, where no unbiased geometric mean exists.
    std::vector<double> log_center;
    std::vector<double> log_mean;

    std::size_t size() const { return center.size(); }
};

struct FitResult {
    double exponent = 0.0;
    double stderr_ = 0.0;
    double fit_low = 0.0;
    double fit_high = 0.0;
    std::size_t n_points = 0;
};

// Per-bin mean of y over geometric bins of x; empty bins omitted.
// Rejects nonpositive x.
BinnedCurve log_bin(std::span<const double> x, std::span<const double> y,
                    int bins_per_decade);

// Normalized histogram on geometric bins: counts divided by linear bin
// width and total sample count, so the curve integrates to one.
BinnedCurve estimate_pdf_logbins(std::span<const double> samples,
                                 int bins_per_decade);

// Ordinary least squares on (log10 x, log10 y) over centers in
// [fit_low, fit_high]. Requires at least 5 positive points in range.
FitResult fit_power_law(const BinnedCurve& curve, double fit_low, double fit_high);

struct TrafficCurve;  // hit_sim.hpp

struct TrafficDegreeCurve {
    std::vector<double> k;          // per-rank in-degree estimate
    std::vector<double> t;
    BinnedCurve binned;
    FitResult gamma_fit;            // effective exponent over the middle decades
    double surfing_slope = 1.0;     // reference: t ~ k
    double naive_search_slope = 0.0;  // reference: t ~ k^(alpha*beta)
};

// Map global rank to in-degree via k(R) = (N/R)^(1/beta), log-bin the
// resulting (k, t) points and fit the effective exponent over the middle
// two decades of k (the top plateau and the bottom decade are excluded).
TrafficDegreeCurve traffic_vs_indegree(const TrafficCurve& curve, double beta,
                                       int bins_per_decade = 10);

}  // namespace ranktraffic
