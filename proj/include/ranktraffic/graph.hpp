#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ranktraffic {

// Directed graph with per-node out-adjacency and cached in-degrees.
// Immutable once built; safe to read from many threads.
class WebGraph {
public:
    WebGraph() = default;
    explicit WebGraph(std::size_t node_count)
        : out_edges_(node_count), in_degree_(node_count, 0) {}

    std::size_t node_count() const { return out_edges_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<std::uint32_t>& out_edges(std::size_t node) const {
        return out_edges_[node];
    }
    std::uint32_t in_degree(std::size_t node) const { return in_degree_[node]; }
    const std::vector<std::uint32_t>& in_degrees() const { return in_degree_; }
    std::size_t out_degree(std::size_t node) const { return out_edges_[node].size(); }

    // throws std::out_of_range if an endpoint is not a valid node id
    void add_edge(std::size_t from, std::size_t to);

private:
    std::vector<std::vector<std::uint32_t>> out_edges_;
    std::vector<std::uint32_t> in_degree_;
    std::size_t edge_count_ = 0;
};

struct GeneratorConfig {
    std::size_t n_nodes = 0;
    std::size_t out_links = 1;       // m: out-links per new node
    double attractiveness = 0.1;     // a: degree offset; exponent is 2 + a/m
    std::uint64_t seed = 0;
    bool allow_duplicates = false;
    int duplicate_retries = 100;     // resample budget before giving up
};

struct GeneratedGraph {
    WebGraph graph;
    std::size_t duplicate_edges_kept = 0;  // duplicates emitted after retry budget
};

// Linear preferential attachment with initial attractiveness: each new node
// attaches `m` out-links to existing nodes chosen with probability
// proportional to (in-degree + a). Asymptotic in-degree pdf exponent 2 + a/m.
// Deterministic for a fixed seed.
GeneratedGraph generate_scale_free_digraph(const GeneratorConfig& config);

inline WebGraph generate_scale_free_digraph(std::size_t n_nodes, std::size_t m,
                                            double a, std::uint64_t seed) {
    return generate_scale_free_digraph(
               GeneratorConfig{n_nodes, m, a, seed}).graph;
}

// Edge-list text format: one "source target" pair per line, 0-based ids,
// '#' lines are comments. An optional "#nodes N" header fixes the node
// count; otherwise it is max id + 1.
WebGraph load_graph(const std::string& path);
void save_graph(const WebGraph& graph, const std::string& path);

}  // namespace ranktraffic
