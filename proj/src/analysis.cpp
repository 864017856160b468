#include "ranktraffic/analysis.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "ranktraffic/hit_sim.hpp"

namespace ranktraffic {

namespace {

struct BinAccum {
    double sum_x = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    double sum_log_x = 0.0;   // over positive y only
    double sum_log_y = 0.0;
    std::size_t n_pos = 0;
};

int anchored_bin(double x, int bins_per_decade) {
    return static_cast<int>(std::floor(std::log10(x) * bins_per_decade));
}

}  // namespace

BinnedCurve log_bin(std::span<const double> x, std::span<const double> y,
                    int bins_per_decade) {
    if (bins_per_decade < 1)
        throw std::invalid_argument("log_bin: bins_per_decade must be >= 1");
    if (x.size() != y.size())
        throw std::invalid_argument("log_bin: x and y size mismatch");
    std::map<int, BinAccum> bins;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0))
            throw std::invalid_argument("log_bin: x values must be positive");
        BinAccum& acc = bins[anchored_bin(x[i], bins_per_decade)];
        acc.sum_x += x[i];
        acc.sum += y[i];
        acc.sum_sq += y[i] * y[i];
        ++acc.n;
        if (y[i] > 0.0) {
            acc.sum_log_x += std::log10(x[i]);
            acc.sum_log_y += std::log10(y[i]);
            ++acc.n_pos;
        }
    }
    BinnedCurve out;
    for (const auto& [idx, acc] : bins) {
        const double mean = acc.sum / static_cast<double>(acc.n);
        double se = 0.0;
        if (acc.n > 1) {
            const double var =
                (acc.sum_sq - acc.sum * mean) / static_cast<double>(acc.n - 1);
            se = std::sqrt(std::max(0.0, var) / static_cast<double>(acc.n));
        }
        out.bin_index.push_back(idx);
        out.center.push_back(acc.sum_x / static_cast<double>(acc.n));
        out.mean.push_back(mean);
        out.stderr_of_mean.push_back(se);
        out.count.push_back(acc.n);
        if (acc.n_pos == acc.n) {
            out.log_center.push_back(acc.sum_log_x / static_cast<double>(acc.n_pos));
            out.log_mean.push_back(acc.sum_log_y / static_cast<double>(acc.n_pos));
        } else {
            out.log_center.push_back(std::nan(""));
            out.log_mean.push_back(std::nan(""));
        }
    }
    return out;
}

BinnedCurve estimate_pdf_logbins(std::span<const double> samples,
                                 int bins_per_decade) {
    if (samples.empty())
        throw std::invalid_argument("estimate_pdf_logbins: empty input");
    std::map<int, std::size_t> counts;
    for (double s : samples) {
        if (!(s > 0.0))
            throw std::invalid_argument("estimate_pdf_logbins: samples must be positive");
        ++counts[anchored_bin(s, bins_per_decade)];
    }
    BinnedCurve out;
    const double total = static_cast<double>(samples.size());
    for (const auto& [idx, n] : counts) {
        const double lo = std::pow(10.0, static_cast<double>(idx) / bins_per_decade);
        const double hi = std::pow(10.0, static_cast<double>(idx + 1) / bins_per_decade);
        const double density = static_cast<double>(n) / (total * (hi - lo));
        out.bin_index.push_back(idx);
        out.center.push_back(std::pow(10.0, (idx + 0.5) / bins_per_decade));
        out.mean.push_back(density);
        out.stderr_of_mean.push_back(std::sqrt(static_cast<double>(n)) /
                                     (total * (hi - lo)));
        out.count.push_back(n);
        out.log_center.push_back((idx + 0.5) / bins_per_decade);
        out.log_mean.push_back(std::log10(density));
    }
    return out;
}

FitResult fit_power_law(const BinnedCurve& curve, double fit_low, double fit_high) {
    std::vector<std::size_t> in_range;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve.center[i] < fit_low || curve.center[i] > fit_high) continue;
        if (!(curve.mean[i] > 0.0))
            throw std::invalid_argument("fit_power_law: nonpositive value in fit range");
        in_range.push_back(i);
    }
    // Geometric bin means preserve exact power laws, so prefer them; but a
    // bin holding any nonpositive sample has no unbiased geometric mean, so
    // fall back to the arithmetic means for the whole range in that case.
    bool use_log = curve.log_mean.size() == curve.size();
    if (use_log)
        for (std::size_t i : in_range)
            if (!std::isfinite(curve.log_mean[i])) {
                use_log = false;
                break;
            }
    std::vector<double> lx, ly;
    for (std::size_t i : in_range) {
        lx.push_back(use_log ? curve.log_center[i] : std::log10(curve.center[i]));
        ly.push_back(use_log ? curve.log_mean[i] : std::log10(curve.mean[i]));
    }
    const std::size_t n = lx.size();
    if (n < 5)
        throw std::invalid_argument("fit_power_law: insufficient bins in fit range (" +
                                    std::to_string(n) + " < 5)");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_power_law: degenerate abscissa");
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        ss_res += r * r;
    }
    FitResult fit;
    fit.exponent = slope;
    fit.stderr_ = n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.fit_low = fit_low;
    fit.fit_high = fit_high;
    fit.n_points = n;
    return fit;
}

TrafficDegreeCurve traffic_vs_indegree(const TrafficCurve& curve, double beta,
                                       int bins_per_decade) {
    if (!(beta > 0.0))
        throw std::invalid_argument("traffic_vs_indegree: beta must be positive");
    const std::size_t n = curve.t.size();
    if (n == 0) throw std::invalid_argument("traffic_vs_indegree: empty curve");

    TrafficDegreeCurve out;
    out.k.resize(n);
    out.t = curve.t;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        out.k[i] = std::pow(dn / static_cast<double>(i + 1), 1.0 / beta);
    out.binned = log_bin(out.k, out.t, bins_per_decade);

    // middle two decades of k, clamped to exclude the top plateau and the
    // bottom decade
    const double span = std::log10(dn) / beta;
    const double mid = span / 2.0;
    double lo = std::max(1.0, mid - 1.0);
    double hi = std::min(span - 1.0, mid + 1.0);
    if (hi <= lo) {
        lo = 0.0;
        hi = span;
    }
    out.gamma_fit =
        fit_power_law(out.binned, std::pow(10.0, lo), std::pow(10.0, hi));
    out.surfing_slope = 1.0;
    out.naive_search_slope = curve.alpha * beta;
    return out;
}

}  // namespace ranktraffic
