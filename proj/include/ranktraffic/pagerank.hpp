#pragma once

#include <cstddef>
#include <vector>

#include "ranktraffic/analysis.hpp"
#include "ranktraffic/graph.hpp"

namespace ranktraffic {

struct PageRankResult {
    std::vector<double> scores;   // normalized to sum 1
    double damping = 0.85;
    int iterations_used = 0;
    double residual = 0.0;        // L1 change of the last iteration
    bool converged = false;
};

// Power iteration with uniform redistribution of dangling-node mass.
// Iterates until the L1 change drops below tol or max_iter is reached; a
// non-converged result is returned with converged=false, never silently.
PageRankResult compute_pagerank(const WebGraph& graph, double damping = 0.85,
                                double tol = 1e-10, int max_iter = 1000);

struct PageRankDegreeCurve {
    BinnedCurve curve;                 // mean PageRank per logarithmic k-bin
    double zero_degree_mean = 0.0;     // k = 0 nodes, reported separately
    std::size_t zero_degree_count = 0;
};

PageRankDegreeCurve pagerank_vs_indegree_curve(const WebGraph& graph,
                                               const PageRankResult& pr,
                                               int bins_per_decade = 10);

}  // namespace ranktraffic
