#include "ranktraffic/graph.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ranktraffic/rng.hpp"

namespace ranktraffic {

void WebGraph::add_edge(std::size_t from, std::size_t to) {
    if (from >= node_count() || to >= node_count())
        throw std::out_of_range("WebGraph::add_edge: node id out of range");
    out_edges_[from].push_back(static_cast<std::uint32_t>(to));
    ++in_degree_[to];
    ++edge_count_;
}

namespace {

bool links_to(const WebGraph& g, std::size_t from, std::size_t to) {
    const auto& out = g.out_edges(from);
    return std::find(out.begin(), out.end(), static_cast<std::uint32_t>(to)) != out.end();
}

}  // namespace

GeneratedGraph generate_scale_free_digraph(const GeneratorConfig& config) {
    const std::size_t n = config.n_nodes;
    const std::size_t m = config.out_links;
    const double a = config.attractiveness;
    if (m < 1) throw std::invalid_argument("generator: out_links must be >= 1");
    if (n <= m) throw std::invalid_argument("generator: n_nodes must exceed out_links");
    if (a < 0.0) throw std::invalid_argument("generator: attractiveness must be >= 0");

    GeneratedGraph result;
    WebGraph& g = result.graph = WebGraph(n);
    SplitMix64 rng(mix64(config.seed));

    // target_pool holds one entry per edge endpoint, so drawing from it is
    // drawing proportionally to in-degree; the uniform branch supplies the
    // attractiveness offset.
    std::vector<std::uint32_t> target_pool;
    target_pool.reserve(n * m);

    // Seed core: node i < m+1 links once to each earlier node (capped at m
    // links; cycled to the full m only when duplicates are allowed).
    const std::size_t core = std::min(n, m + 1);
    for (std::size_t i = 1; i < core; ++i) {
        const std::size_t links = config.allow_duplicates ? m : std::min(i, m);
        for (std::size_t e = 0; e < links; ++e) {
            const std::size_t target = e % i;
            g.add_edge(i, target);
            target_pool.push_back(static_cast<std::uint32_t>(target));
        }
    }

    for (std::size_t i = core; i < n; ++i) {
        for (std::size_t e = 0; e < m; ++e) {
            std::size_t target = i;  // sentinel
            bool duplicate = true;
            for (int attempt = 0; attempt <= config.duplicate_retries; ++attempt) {
                // existing nodes are 0..i-1
                const double total = static_cast<double>(g.edge_count()) +
                                     a * static_cast<double>(i);
                const double u = rng.uniform01() * total;
                if (u < static_cast<double>(g.edge_count()))
                    target = target_pool[static_cast<std::size_t>(u)];
                else
                    target = rng.uniform_index(i) - 1;
                duplicate = links_to(g, i, target);
                if (!duplicate || config.allow_duplicates) break;
            }
            if (duplicate) {
                if (!config.allow_duplicates) ++result.duplicate_edges_kept;
            }
            g.add_edge(i, target);
            target_pool.push_back(static_cast<std::uint32_t>(target));
        }
    }
    return result;
}

WebGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph: cannot open " + path);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t declared_nodes = 0;
    bool have_header = false;
    std::size_t max_id = 0;
    bool any_node = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            if (hs >> key && key == "nodes") {
                if (!(hs >> declared_nodes))
                    throw std::runtime_error("load_graph: " + path + ":" +
                                             std::to_string(lineno) +
                                             ": malformed #nodes header");
                have_header = true;
            }
            continue;
        }
        std::istringstream ls(line);
        long long from = -1, to = -1;
        std::string extra;
        if (!(ls >> from >> to) || (ls >> extra) || from < 0 || to < 0)
            throw std::runtime_error("load_graph: " + path + ":" +
                                     std::to_string(lineno) + ": malformed edge line");
        edges.emplace_back(static_cast<std::size_t>(from), static_cast<std::size_t>(to));
        max_id = std::max({max_id, static_cast<std::size_t>(from),
                           static_cast<std::size_t>(to)});
        any_node = true;
    }

    const std::size_t n = have_header ? declared_nodes : (any_node ? max_id + 1 : 0);
    WebGraph g(n);
    for (const auto& [from, to] : edges) {
        if (from >= n || to >= n)
            throw std::out_of_range("load_graph: " + path + ": node id " +
                                    std::to_string(std::max(from, to)) +
                                    " >= declared node count " + std::to_string(n));
        g.add_edge(from, to);
    }
    return g;
}

void save_graph(const WebGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_graph: cannot open " + path);
    out << "#nodes " << graph.node_count() << "\n";
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        for (std::uint32_t t : graph.out_edges(i)) out << i << " " << t << "\n";
    if (!out) throw std::runtime_error("save_graph: write failed for " + path);
}

}  // namespace ranktraffic
