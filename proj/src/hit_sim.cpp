#include "ranktraffic/hit_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "ranktraffic/click_models.hpp"
#include "ranktraffic/rng.hpp"

namespace ranktraffic {

namespace {

constexpr std::size_t kMaxExactN = 10'000;
constexpr std::size_t kMaxMonteCarloN = 10'000'000;
// Fixed merge-chunk count: per-query randomness is keyed by query index and
// chunks are merged in index order, so accumulators are bit-identical for
// any worker count.
constexpr std::uint64_t kMergeChunks = 64;
// log-space terms below peak - 45 are dropped (relative weight < 3e-20)
constexpr double kLogCutoff = 45.0;

double powneg(std::size_t r, double alpha) {
    return std::pow(static_cast<double>(r), -alpha);
}

// lgamma(i+1) table, giving log binomial coefficients
struct LogFactTable {
    std::vector<double> lf;

    explicit LogFactTable(std::size_t max_n) : lf(max_n + 1) {
        for (std::size_t i = 0; i <= max_n; ++i)
            lf[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }

    double lchoose(std::size_t n, std::size_t k) const {
        return lf[n] - lf[k] - lf[n - k];
    }
};

}  // namespace

HitSetDistribution::HitSetDistribution(double delta, double h_min, double h_max)
    : delta_(delta), h_min_(h_min), h_max_(h_max) {
    if (!std::isfinite(delta))
        throw std::invalid_argument("HitSetDistribution: delta must be finite");
    if (!(h_min > 0.0) || !(h_max <= 1.0) || h_min > h_max)
        throw std::invalid_argument(
            "HitSetDistribution: need 0 < h_min <= h_max <= 1");
    if (h_min == h_max) {
        b_ = 0.0;  // degenerate point mass
    } else if (delta_ == 1.0) {
        b_ = 1.0 / std::log(h_max_ / h_min_);
    } else {
        b_ = (1.0 - delta_) /
             (std::pow(h_max_, 1.0 - delta_) - std::pow(h_min_, 1.0 - delta_));
    }
}

double HitSetDistribution::pdf(double h) const {
    if (h < h_min_ || h > h_max_ || h_min_ == h_max_) return 0.0;
    return b_ * std::pow(h, -delta_);
}

double HitSetDistribution::cdf(double h) const {
    if (h < h_min_) return 0.0;
    if (h >= h_max_) return 1.0;
    if (delta_ == 1.0) return b_ * std::log(h / h_min_);
    return b_ * (std::pow(h, 1.0 - delta_) - std::pow(h_min_, 1.0 - delta_)) /
           (1.0 - delta_);
}

double HitSetDistribution::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("HitSetDistribution::quantile: u outside [0,1]");
    if (h_min_ == h_max_) return h_min_;
    if (delta_ == 1.0) return h_min_ * std::pow(h_max_ / h_min_, u);
    const double a = std::pow(h_min_, 1.0 - delta_);
    const double b = std::pow(h_max_, 1.0 - delta_);
    return std::pow(a + u * (b - a), 1.0 / (1.0 - delta_));
}

std::vector<double> TrafficCurve::rank_stderr() const {
    std::vector<double> se(t.size(), 0.0);
    if (t2.size() != t.size() || queries == 0) return se;
    for (std::size_t i = 0; i < t.size(); ++i)
        se[i] = std::sqrt(std::max(0.0, t2[i] - t[i] * t[i]) /
                          static_cast<double>(queries));
    return se;
}

double pr_rank_in_hitlist(std::size_t R, std::size_t r, std::size_t N,
                          std::size_t n, double h) {
    if (r < 1 || n < r || N < n || R < 1 || R > N)
        throw std::invalid_argument("pr_rank_in_hitlist: need 1 <= r <= n <= N, 1 <= R <= N");
    if (!(h >= 0.0 && h <= 1.0))
        throw std::invalid_argument("pr_rank_in_hitlist: h outside [0,1]");
    if (r > R || n - r > N - R) return 0.0;  // combinatorially impossible
    if (h == 0.0) return 0.0;
    if (h == 1.0) return n == N ? 1.0 : 0.0;
    const LogFactTable lf(N);
    const double lt = static_cast<double>(n) * std::log(h) +
                      static_cast<double>(N - n) * std::log1p(-h) +
                      lf.lchoose(R - 1, r - 1) + lf.lchoose(N - R, n - r);
    return std::exp(lt);
}

namespace {

struct ExactTables {
    std::size_t n_pages;
    double alpha;
    double log_h;
    double log_1mh;
    LogFactTable lf;
    std::vector<double> log_pow_r;  // -alpha ln r
    std::vector<double> log_z;      // log of the Eq. 15 normalization per n
    std::size_t n_lo = 1, n_hi = 0;

    ExactTables(std::size_t N, double h, double alpha_)
        : n_pages(N),
          alpha(alpha_),
          log_h(std::log(h)),
          log_1mh(std::log1p(-h)),
          lf(N),
          log_pow_r(N + 1),
          log_z(N + 1) {
        ZipfNorm z(N, alpha_);
        for (std::size_t r = 1; r <= N; ++r) {
            log_pow_r[r] = -alpha_ * std::log(static_cast<double>(r));
            log_z[r] = std::log(z(r));
        }
        // the total weight of hit-list size n is the Binomial(N-1, h) pmf at
        // n-1 (the two binomials in the rank sum telescope); keep only sizes
        // within kLogCutoff of the peak
        std::vector<double> lw(N + 1);
        double lw_max = -INFINITY;
        for (std::size_t n = 1; n <= N; ++n) {
            lw[n] = static_cast<double>(n) * log_h +
                    static_cast<double>(N - n) * log_1mh +
                    lf.lchoose(N - 1, n - 1);
            lw_max = std::max(lw_max, lw[n]);
        }
        n_lo = 1;
        while (n_lo < N && lw[n_lo] < lw_max - kLogCutoff) ++n_lo;
        n_hi = N;
        while (n_hi > n_lo && lw[n_hi] < lw_max - kLogCutoff) --n_hi;
    }

    // sum over within-list ranks r for one (R, n); terms are log-concave in
    // r, so expand outward from the hypergeometric mode and stop at the cutoff
    double rank_sum(std::size_t R, std::size_t n) const {
        const std::size_t N = n_pages;
        const std::size_t r_lo = n > N - R ? n - (N - R) : 1;
        const std::size_t r_hi = std::min(n, R);
        if (r_lo > r_hi) return 0.0;
        const double base = static_cast<double>(n) * log_h +
                            static_cast<double>(N - n) * log_1mh - log_z[n];
        auto log_term = [&](std::size_t r) {
            return base + lf.lchoose(R - 1, r - 1) + lf.lchoose(N - R, n - r) +
                   log_pow_r[r];
        };
        const std::size_t rc = std::clamp(
            static_cast<std::size_t>(std::llround(
                static_cast<double>(n) * static_cast<double>(R) /
                static_cast<double>(N))),
            r_lo, r_hi);
        double peak = -INFINITY;
        double acc = 0.0;
        for (std::size_t r = rc;; --r) {
            const double lt = log_term(r);
            if (lt > peak)
                peak = lt;
            else if (lt < peak - kLogCutoff)
                break;
            acc += std::exp(lt);
            if (r == r_lo) break;
        }
        peak = -INFINITY;
        for (std::size_t r = rc + 1; r <= r_hi; ++r) {
            const double lt = log_term(r);
            if (lt > peak)
                peak = lt;
            else if (lt < peak - kLogCutoff)
                break;
            acc += std::exp(lt);
        }
        return acc;
    }

    double click_prob(std::size_t R) const {
        long double acc = 0.0L;
        for (std::size_t n = n_lo; n <= n_hi; ++n) acc += rank_sum(R, n);
        return static_cast<double>(acc);
    }
};

void validate_exact_args(std::size_t N, double h, double alpha) {
    if (N < 1) throw std::invalid_argument("exact_click_prob: N must be >= 1");
    if (N > kMaxExactN)
        throw std::invalid_argument(
            "exact_click_prob: N > 10^4 is impractical for the exact double "
            "sum; use monte_carlo_traffic");
    if (!(h >= 0.0 && h <= 1.0))
        throw std::invalid_argument("exact_click_prob: h outside [0,1]");
    if (!(alpha > 0.0))
        throw std::invalid_argument("exact_click_prob: alpha must be positive");
}

}  // namespace

double exact_click_prob(std::size_t R, std::size_t N, double h, double alpha) {
    validate_exact_args(N, h, alpha);
    if (R < 1 || R > N)
        throw std::invalid_argument("exact_click_prob: R outside [1, N]");
    if (h == 0.0) return 0.0;
    if (h == 1.0) {
        ZipfNorm z(N, alpha);
        return powneg(R, alpha) / z(N);
    }
    return ExactTables(N, h, alpha).click_prob(R);
}

TrafficCurve exact_traffic(std::size_t N, double h, double alpha) {
    validate_exact_args(N, h, alpha);
    TrafficCurve curve;
    curve.n_pages = N;
    curve.alpha = alpha;
    curve.h = h;
    curve.mode = CurveMode::exact;
    curve.t.resize(N, 0.0);
    if (h == 0.0) return curve;
    if (h == 1.0) {
        ZipfNorm z(N, alpha);
        for (std::size_t R = 1; R <= N; ++R) curve.t[R - 1] = powneg(R, alpha) / z(N);
        return curve;
    }
    const ExactTables tables(N, h, alpha);
    for (std::size_t R = 1; R <= N; ++R) curve.t[R - 1] = tables.click_prob(R);
    return curve;
}

namespace {

// click-weight tables shared by all workers of one simulation
struct ClickTables {
    std::size_t table_max;       // largest displayable within-list rank
    std::vector<double> pow_r;   // r^-alpha
    std::vector<double> z;       // Z(n) = sum m^-alpha, n <= table_max
    // page-grouped mode
    int page_size = 10;
    std::vector<double> pow_page;
    std::vector<double> z_page;

    ClickTables(std::size_t N, double alpha, const SimOptions& opt) {
        table_max = opt.cap_enabled ? std::min(N, opt.display_cap) : N;
        pow_r.resize(table_max + 1, 0.0);
        z.resize(table_max + 1, 0.0);
        for (std::size_t r = 1; r <= table_max; ++r) {
            pow_r[r] = powneg(r, alpha);
            z[r] = z[r - 1] + pow_r[r];
        }
        if (opt.page_grouped) {
            page_size = opt.page_size;
            const std::size_t pages =
                (table_max + page_size - 1) / static_cast<std::size_t>(page_size);
            pow_page.resize(pages + 1, 0.0);
            z_page.resize(pages + 1, 0.0);
            for (std::size_t p = 1; p <= pages; ++p) {
                pow_page[p] = powneg(p, alpha);
                z_page[p] = z_page[p - 1] + pow_page[p];
            }
        }
    }
};

struct WorkerScratch {
    std::vector<std::uint8_t> mark;
    std::vector<std::size_t> list;

    explicit WorkerScratch(std::size_t N) : mark(N, 0) { list.reserve(1024); }
};

inline void accumulate_clicks(const ClickTables& tables, bool page_grouped,
                              const std::size_t* ranks, std::size_t taken,
                              std::size_t n_disp, double* acc, double* acc2) {
    if (!page_grouped) {
        const double inv_z = 1.0 / tables.z[n_disp];
        for (std::size_t i = 0; i < taken; ++i) {
            const double w = tables.pow_r[i + 1] * inv_z;
            acc[ranks[i] - 1] += w;
            acc2[ranks[i] - 1] += w * w;
        }
        return;
    }
    const std::size_t ps = static_cast<std::size_t>(tables.page_size);
    const std::size_t pages = (n_disp + ps - 1) / ps;
    const double inv_zp = 1.0 / tables.z_page[pages];
    for (std::size_t i = 0; i < taken; ++i) {
        const std::size_t page = i / ps + 1;
        const std::size_t hits_on_page =
            page < pages ? ps : n_disp - (pages - 1) * ps;
        const double w = tables.pow_page[page] * inv_zp /
                         static_cast<double>(hits_on_page);
        acc[ranks[i] - 1] += w;
        acc2[ranks[i] - 1] += w * w;
    }
}

inline void process_query(std::uint64_t master_seed, std::uint64_t q,
                          std::size_t N, double h_fixed,
                          const HitSetDistribution* dist,
                          const ClickTables& tables, const SimOptions& opt,
                          WorkerScratch& sc, double* acc, double* acc2) {
    SplitMix64 rng = query_stream(master_seed, q);
    const double h = dist ? dist->quantile(rng.uniform01()) : h_fixed;

    std::size_t n;
    if (h <= 0.0) {
        return;
    } else if (h >= 1.0) {
        n = N;
    } else {
        std::binomial_distribution<long long> size_dist(
            static_cast<long long>(N), h);
        n = static_cast<std::size_t>(size_dist(rng));
    }
    if (n == 0) return;  // empty hit list, no clicks
    const std::size_t n_disp =
        opt.cap_enabled ? std::min(n, opt.display_cap) : n;

    if (16 * n >= N) {
        // ordered selection sampling; stops once the displayed prefix is full
        sc.list.clear();
        std::size_t remaining = n;
        for (std::size_t page = 1; page <= N; ++page) {
            if (rng.uniform01() * static_cast<double>(N - page + 1) <
                static_cast<double>(remaining)) {
                sc.list.push_back(page);
                --remaining;
                if (sc.list.size() == n_disp || remaining == 0) break;
            }
        }
        accumulate_clicks(tables, opt.page_grouped, sc.list.data(),
                          sc.list.size(), n_disp, acc, acc2);
    } else {
        // Floyd's sampling of n distinct ranks, then sort ascending
        sc.list.clear();
        for (std::size_t j = N - n + 1; j <= N; ++j) {
            std::size_t pick = rng.uniform_index(j);
            if (sc.mark[pick - 1]) pick = j;
            sc.mark[pick - 1] = 1;
            sc.list.push_back(pick);
        }
        std::sort(sc.list.begin(), sc.list.end());
        accumulate_clicks(tables, opt.page_grouped, sc.list.data(),
                          std::min(n_disp, sc.list.size()), n_disp, acc, acc2);
        for (std::size_t pick : sc.list) sc.mark[pick - 1] = 0;
    }
}

TrafficCurve run_simulation(std::size_t N, double h_fixed,
                            const HitSetDistribution* dist, double alpha,
                            const SimOptions& opt) {
    if (N < 1) throw std::invalid_argument("monte_carlo_traffic: N must be >= 1");
    if (N > kMaxMonteCarloN)
        throw std::invalid_argument("monte_carlo_traffic: N > 10^7 unsupported");
    if (opt.queries < 1)
        throw std::invalid_argument("monte_carlo_traffic: queries must be >= 1");
    if (!dist && !(h_fixed >= 0.0 && h_fixed <= 1.0))
        throw std::invalid_argument("monte_carlo_traffic: h outside [0,1]");
    if (!(alpha > 0.0))
        throw std::invalid_argument("monte_carlo_traffic: alpha must be positive");
    if (opt.cap_enabled && opt.display_cap < 1)
        throw std::invalid_argument("monte_carlo_traffic: display_cap must be >= 1");
    if (opt.page_grouped && opt.page_size < 1)
        throw std::invalid_argument("monte_carlo_traffic: page_size must be >= 1");

    const ClickTables tables(N, alpha, opt);
    const std::uint64_t chunks = std::min<std::uint64_t>(kMergeChunks, opt.queries);

    std::vector<double> acc(N, 0.0), acc2(N, 0.0);
    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex merge_mutex;
    std::condition_variable merge_cv;
    std::uint64_t merge_turn = 0;

    auto worker = [&]() {
        std::vector<double> acc_local(N), acc2_local(N);
        WorkerScratch scratch(N);
        for (;;) {
            const std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= chunks) break;
            const std::uint64_t q_begin = opt.queries * c / chunks;
            const std::uint64_t q_end = opt.queries * (c + 1) / chunks;
            std::fill(acc_local.begin(), acc_local.end(), 0.0);
            std::fill(acc2_local.begin(), acc2_local.end(), 0.0);
            for (std::uint64_t q = q_begin; q < q_end; ++q)
                process_query(opt.seed, q, N, h_fixed, dist, tables, opt,
                              scratch, acc_local.data(), acc2_local.data());
            std::unique_lock lock(merge_mutex);
            merge_cv.wait(lock, [&] { return merge_turn == c; });
            for (std::size_t i = 0; i < N; ++i) {
                acc[i] += acc_local[i];
                acc2[i] += acc2_local[i];
            }
            ++merge_turn;
            merge_cv.notify_all();
        }
    };

    const int n_threads = std::max(1, opt.threads);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    TrafficCurve curve;
    curve.n_pages = N;
    curve.alpha = alpha;
    curve.h = dist ? -1.0 : h_fixed;
    curve.queries = opt.queries;
    curve.mode = dist ? CurveMode::convolved : CurveMode::monte_carlo;
    curve.t.resize(N);
    curve.t2.resize(N);
    const double inv_q = 1.0 / static_cast<double>(opt.queries);
    for (std::size_t i = 0; i < N; ++i) {
        curve.t[i] = acc[i] * inv_q;
        curve.t2[i] = acc2[i] * inv_q;
    }
    return curve;
}

}  // namespace

TrafficCurve monte_carlo_traffic(std::size_t N, double h, double alpha,
                                 const SimOptions& opt) {
    return run_simulation(N, h, nullptr, alpha, opt);
}

TrafficCurve convolved_traffic(std::size_t N, const HitSetDistribution& dist,
                               double alpha, const SimOptions& opt) {
    TrafficCurve curve = run_simulation(N, -1.0, &dist, alpha, opt);
    curve.delta = dist.delta();
    curve.dist_h_min = dist.h_min();
    curve.dist_h_max = dist.h_max();
    return curve;
}

namespace {

// Anchored log-binned means keyed by bin index. Bins that stick out of the
// curve's abscissa support [x_lo, x_hi] are dropped: a partially covered
// boundary bin averages over a sub-range of the bin and would be biased
// against a fully covered bin of another curve.
std::map<int, double> bin_log_means(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    int bins_per_decade, double x_lo,
                                    double x_hi) {
    std::map<int, std::pair<double, std::size_t>> bins;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const int idx =
            static_cast<int>(std::floor(std::log10(x[i]) * bins_per_decade));
        auto& [sum, count] = bins[idx];
        sum += y[i];
        ++count;
    }
    std::map<int, double> means;
    for (const auto& [idx, sc] : bins) {
        const double edge_lo = std::pow(10.0, static_cast<double>(idx) /
                                                  bins_per_decade);
        const double edge_hi = std::pow(10.0, static_cast<double>(idx + 1) /
                                                  bins_per_decade);
        if (edge_lo < x_lo * (1.0 - 1e-9) || edge_hi > x_hi * (1.0 + 1e-9))
            continue;
        means[idx] = sc.first / static_cast<double>(sc.second);
    }
    return means;
}

}  // namespace

CollapseResult collapse_fixed_h(const std::vector<TrafficCurve>& curves,
                                int bins_per_decade) {
    if (curves.size() < 2)
        throw std::invalid_argument("collapse_fixed_h: need at least 2 curves");
    for (const auto& c : curves) {
        if (c.n_pages != curves.front().n_pages || c.alpha != curves.front().alpha)
            throw std::invalid_argument("collapse_fixed_h: curves must share N and alpha");
        if (!(c.h > 0.0 && c.h <= 1.0))
            throw std::invalid_argument("collapse_fixed_h: curves must have fixed h");
    }

    std::vector<std::map<int, double>> binned;
    for (const auto& c : curves) {
        std::vector<double> x(c.t.size()), y(c.t.size());
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            x[i] = static_cast<double>(i + 1) * c.h;
            y[i] = c.t[i] / c.h;
        }
        binned.push_back(bin_log_means(x, y, bins_per_decade, c.h,
                                       static_cast<double>(c.n_pages) * c.h));
    }

    CollapseResult result;
    result.scale.assign(curves.size(), 1.0);
    result.curves.resize(curves.size());
    for (const auto& [idx, ref_val] : binned.front()) {
        bool common = true;
        for (std::size_t c = 1; c < binned.size(); ++c)
            if (!binned[c].contains(idx)) {
                common = false;
                break;
            }
        if (!common) continue;
        result.x.push_back(std::pow(10.0, (idx + 0.5) / bins_per_decade));
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t c = 0; c < binned.size(); ++c) {
            const double v = binned[c][idx];
            result.curves[c].push_back(v);
            lo = std::min(lo, std::log10(v));
            hi = std::max(hi, std::log10(v));
        }
        result.max_deviation_dex = std::max(result.max_deviation_dex, hi - lo);
    }
    if (result.x.empty())
        throw std::runtime_error("collapse_fixed_h: no overlap in Rh support");
    return result;
}

CollapseResult collapse_over_n(const std::vector<TrafficCurve>& curves,
                               int bins_per_decade) {
    if (curves.empty())
        throw std::invalid_argument("collapse_over_n: no curves");
    std::size_t ref = 0;
    for (std::size_t c = 1; c < curves.size(); ++c)
        if (curves[c].n_pages > curves[ref].n_pages) ref = c;

    std::vector<std::map<int, double>> binned;
    for (const auto& c : curves) {
        // drop the finite-h_max plateau: it depends on R, not R/N
        std::size_t first_rank = 1;
        if (c.dist_h_max > 0.0)
            first_rank = static_cast<std::size_t>(3.0 / c.dist_h_max) + 1;
        std::vector<double> x, y;
        for (std::size_t i = first_rank - 1; i < c.t.size(); ++i) {
            x.push_back(static_cast<double>(i + 1) / static_cast<double>(c.n_pages));
            y.push_back(c.t[i]);
        }
        binned.push_back(bin_log_means(
            x, y, bins_per_decade,
            static_cast<double>(first_rank) / static_cast<double>(c.n_pages),
            1.0));
    }

    std::vector<int> common;
    for (const auto& [idx, v] : binned[ref]) {
        bool everywhere = true;
        for (const auto& b : binned)
            if (!b.contains(idx)) {
                everywhere = false;
                break;
            }
        if (everywhere) common.push_back(idx);
    }
    if (common.empty())
        throw std::runtime_error("collapse_over_n: no overlap in R/N support");

    CollapseResult result;
    result.scale.resize(curves.size());
    result.curves.resize(curves.size());
    for (int idx : common)
        result.x.push_back(std::pow(10.0, (idx + 0.5) / bins_per_decade));

    for (std::size_t c = 0; c < curves.size(); ++c) {
        // least-squares log-space shift onto the reference
        double shift = 0.0;
        for (int idx : common)
            shift += std::log10(binned[ref][idx]) - std::log10(binned[c][idx]);
        shift /= static_cast<double>(common.size());
        result.scale[c] = std::pow(10.0, shift);
        for (int idx : common) {
            const double aligned = binned[c][idx] * result.scale[c];
            result.curves[c].push_back(aligned);
            result.max_deviation_dex =
                std::max(result.max_deviation_dex,
                         std::abs(std::log10(aligned) - std::log10(binned[ref][idx])));
        }
    }
    return result;
}

}  // namespace ranktraffic
