#include "ranktraffic/pagerank.hpp"

#include <cmath>
#include <stdexcept>

namespace ranktraffic {

PageRankResult compute_pagerank(const WebGraph& graph, double damping,
                                double tol, int max_iter) {
    if (!(damping > 0.0 && damping < 1.0))
        throw std::invalid_argument("compute_pagerank: damping must be in (0,1)");
    if (!(tol > 0.0))
        throw std::invalid_argument("compute_pagerank: tol must be positive");
    if (max_iter < 1)
        throw std::invalid_argument("compute_pagerank: max_iter must be >= 1");
    const std::size_t n = graph.node_count();
    if (n == 0) throw std::invalid_argument("compute_pagerank: empty graph");

    PageRankResult result;
    result.damping = damping;
    std::vector<double> cur(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);

    for (int iter = 1; iter <= max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (graph.out_degree(i) == 0) dangling += cur[i];

        const double base = (1.0 - damping) / static_cast<double>(n) +
                            damping * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& out = graph.out_edges(i);
            if (out.empty()) continue;
            const double share = damping * cur[i] / static_cast<double>(out.size());
            for (std::uint32_t t : out) next[t] += share;
        }

        // renormalize so the sum stays 1 despite rounding drift
        double sum = 0.0;
        for (double v : next) sum += v;
        for (double& v : next) v /= sum;

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - cur[i]);
        cur.swap(next);
        result.iterations_used = iter;
        result.residual = change;
        if (change < tol) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(cur);
    return result;
}

PageRankDegreeCurve pagerank_vs_indegree_curve(const WebGraph& graph,
                                               const PageRankResult& pr,
                                               int bins_per_decade) {
    if (pr.scores.size() != graph.node_count())
        throw std::invalid_argument(
            "pagerank_vs_indegree_curve: scores do not match graph");
    PageRankDegreeCurve out;
    std::vector<double> k, p;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        if (graph.in_degree(i) == 0) {
            out.zero_degree_mean += pr.scores[i];
            ++out.zero_degree_count;
        } else {
            k.push_back(static_cast<double>(graph.in_degree(i)));
            p.push_back(pr.scores[i]);
        }
    }
    if (out.zero_degree_count > 0)
        out.zero_degree_mean /= static_cast<double>(out.zero_degree_count);
    if (!k.empty()) out.curve = log_bin(k, p, bins_per_decade);
    return out;
}

}  // namespace ranktraffic
