#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ranktraffic/graph.hpp"

using namespace ranktraffic;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;

    explicit TempFile(const std::string& name, const std::string& content = "") {
        path = fs::temp_directory_path() / name;
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.string().c_str()); }
};

void check_degree_invariants(const WebGraph& g) {
    std::size_t out_sum = 0, in_sum = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        out_sum += g.out_degree(i);
        in_sum += g.in_degree(i);
    }
    CHECK(out_sum == g.edge_count());
    CHECK(in_sum == g.edge_count());
}

}  // namespace

TEST_CASE("three nodes with one link each give two edges") {
    const WebGraph g = generate_scale_free_digraph(3, 1, 1.0, 5);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);  // nodes 1 and 2 each emit one link
    check_degree_invariants(g);
}

TEST_CASE("two nodes force a single edge to the only target") {
    const WebGraph g = generate_scale_free_digraph(2, 1, 0.0, 1);
    CHECK(g.edge_count() == 1);
    REQUIRE(g.out_degree(1) == 1);
    CHECK(g.out_edges(1)[0] == 0);
}

TEST_CASE("generator rejects bad parameters") {
    CHECK_THROWS_AS(generate_scale_free_digraph(5, 5, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_scale_free_digraph(4, 5, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_scale_free_digraph(10, 2, -0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(
        generate_scale_free_digraph(GeneratorConfig{10, 0, 0.1, 1}),
        std::invalid_argument);
}

TEST_CASE("generated graphs have no self loops or duplicate edges by default") {
    const GeneratedGraph gen =
        generate_scale_free_digraph(GeneratorConfig{2000, 3, 0.3, 17});
    const WebGraph& g = gen.graph;
    CHECK(gen.duplicate_edges_kept == 0);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto& out = g.out_edges(i);
        for (std::size_t a = 0; a < out.size(); ++a) {
            CHECK(out[a] != i);
            for (std::size_t b = a + 1; b < out.size(); ++b) CHECK(out[a] != out[b]);
        }
    }
    check_degree_invariants(g);
}

TEST_CASE("every non-seed node emits exactly m links") {
    const std::size_t m = 4;
    const WebGraph g = generate_scale_free_digraph(500, m, 0.4, 3);
    for (std::size_t i = m + 1; i < g.node_count(); ++i) CHECK(g.out_degree(i) == m);
}

TEST_CASE("generation is reproducible for a fixed seed") {
    const WebGraph a = generate_scale_free_digraph(1000, 3, 0.3, 99);
    const WebGraph b = generate_scale_free_digraph(1000, 3, 0.3, 99);
    REQUIRE(a.edge_count() == b.edge_count());
    for (std::size_t i = 0; i < a.node_count(); ++i)
        CHECK(a.out_edges(i) == b.out_edges(i));

    const WebGraph c = generate_scale_free_digraph(1000, 3, 0.3, 100);
    bool identical = true;
    for (std::size_t i = 0; i < a.node_count() && identical; ++i)
        identical = a.out_edges(i) == c.out_edges(i);
    CHECK_FALSE(identical);
}

TEST_CASE("add_edge validates node ids") {
    WebGraph g(3);
    g.add_edge(0, 2);
    CHECK(g.in_degree(2) == 1);
    CHECK_THROWS_AS(g.add_edge(0, 3), std::out_of_range);
    CHECK_THROWS_AS(g.add_edge(3, 0), std::out_of_range);
}

TEST_CASE("load_graph parses a plain edge list") {
    TempFile f("rt_edge_list.txt", "0 1\n1 0\n");
    const WebGraph g = load_graph(f.path.string());
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 2);
    CHECK(g.in_degree(0) == 1);
    CHECK(g.in_degree(1) == 1);
}

TEST_CASE("load_graph honours the #nodes header") {
    TempFile f("rt_header.txt", "#nodes 5\n0 1\n");
    const WebGraph g = load_graph(f.path.string());
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("empty file gives an empty graph") {
    TempFile f("rt_empty.txt", "");
    const WebGraph g = load_graph(f.path.string());
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("malformed lines are reported with their line number") {
    TempFile f("rt_bad.txt", "0 1\nnot an edge\n");
    try {
        load_graph(f.path.string());
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("out-of-range node ids are rejected") {
    TempFile f("rt_range.txt", "#nodes 2\n0 5\n");
    CHECK_THROWS_AS(load_graph(f.path.string()), std::out_of_range);
}

TEST_CASE("save then load round-trips the adjacency") {
    const WebGraph g = generate_scale_free_digraph(200, 2, 0.2, 8);
    TempFile f("rt_roundtrip.txt");
    save_graph(g, f.path.string());
    const WebGraph r = load_graph(f.path.string());
    REQUIRE(r.node_count() == g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i)
        CHECK(r.out_edges(i) == g.out_edges(i));
}
