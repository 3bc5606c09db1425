#include "gig/errors.hpp"
#include "gig/graph.hpp"
#include "support.hpp"

#include <doctest.h>

#include <array>
#include <sstream>

using namespace gig;
using testing::graph_of;

TEST_CASE("gene symbols are trimmed and uppercased") {
    CHECK(GeneSymbol("  tp53 ").str() == "TP53");
    CHECK(GeneSymbol("Brca1") == GeneSymbol("BRCA1"));
    CHECK_THROWS_AS(GeneSymbol("   "), DataError);
    CHECK(normalize_symbol(" \t") == "");
}

TEST_CASE("graph construction canonicalizes") {
    auto g = graph_of({{"B", "A"}, {"A", "B"}, {"C", "B"}}, {"D"});
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.nodes().front().str() == "A");
    CHECK(g.edges().front() == Edge{GeneSymbol("A"), GeneSymbol("B")});
    CHECK(g.has_edge(GeneSymbol("B"), GeneSymbol("A")));
    CHECK_FALSE(g.has_edge(GeneSymbol("A"), GeneSymbol("C")));
    CHECK(g.index_of(GeneSymbol("D")) == 3);
    CHECK(g.index_of(GeneSymbol("Z")) == -1);
    CHECK_THROWS_AS(graph_of({{"A", "A"}}), DataError);
}

TEST_CASE("merge_graphs") {
    SUBCASE("empty inputs") {
        std::array<MolecularGraph, 2> in{};
        auto m = merge_graphs(in);
        CHECK(m.node_count() == 0);
        CHECK(m.edge_count() == 0);
    }
    SUBCASE("path into triangle deduplicates edges") {
        std::array in{graph_of({{"A", "B"}, {"B", "C"}}), graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}})};
        auto m = merge_graphs(in);
        CHECK(m == in[1]);
    }
    SUBCASE("two triangles share a node") {
        std::array in{graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}}), graph_of({{"C", "D"}, {"D", "E"}, {"C", "E"}})};
        auto m = merge_graphs(in);
        CHECK(m.node_count() == 5);
        CHECK(m.edge_count() == 6);
    }
    SUBCASE("commutative and associative on random graphs") {
        Rng rng(9);
        for (int t = 0; t < 20; ++t) {
            auto a = testing::random_graph(8, 0.3, rng);
            auto b = restrict_to_genes(testing::random_graph(12, 0.2, rng),
                                       {GeneSymbol("N003"), GeneSymbol("N009"), GeneSymbol("N010"), GeneSymbol("N011")});
            auto c = testing::random_graph(5, 0.5, rng);
            std::array ab{a, b}, ba{b, a};
            CHECK(merge_graphs(ab) == merge_graphs(ba));
            std::array ab_c{merge_graphs(ab), c};
            std::array bc{b, c};
            std::array a_bc{a, merge_graphs(bc)};
            CHECK(merge_graphs(ab_c) == merge_graphs(a_bc));
            auto m = merge_graphs(ab);
            CHECK(m.node_count() <= a.node_count() + b.node_count());
            CHECK(m.edge_count() <= a.edge_count() + b.edge_count());
        }
    }
}

TEST_CASE("strip_self_loops") {
    GraphBuilder b;
    b.add_edge(GeneSymbol("A"), GeneSymbol("A"));
    b.add_edge(GeneSymbol("A"), GeneSymbol("B"));
    auto g = strip_self_loops(b);
    CHECK(g == graph_of({{"A", "B"}}));

    GraphBuilder only_loop;
    only_loop.add_edge(GeneSymbol("A"), GeneSymbol("A"));
    auto single = strip_self_loops(only_loop);
    CHECK(single.node_count() == 1);
    CHECK(single.edge_count() == 0);

    auto tri = graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}});
    CHECK(strip_self_loops(tri) == tri);
    CHECK(strip_self_loops(strip_self_loops(tri)) == tri);
}

TEST_CASE("restrict_to_genes") {
    auto tri = graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}});
    CHECK(restrict_to_genes(tri, {GeneSymbol("A"), GeneSymbol("B")}) == graph_of({{"A", "B"}}));
    CHECK(restrict_to_genes(tri, {}).empty());
    GeneSet wide{GeneSymbol("A"), GeneSymbol("B"), GeneSymbol("C"), GeneSymbol("D")};
    CHECK(restrict_to_genes(tri, wide) == tri);
    GeneSet ab{GeneSymbol("A"), GeneSymbol("B")};
    CHECK(restrict_to_genes(restrict_to_genes(tri, ab), ab) == restrict_to_genes(tri, ab));
}

TEST_CASE("adjacency view") {
    auto g = graph_of({{"A", "B"}, {"A", "C"}, {"C", "D"}}, {"E"});
    auto adj = build_adjacency(g);
    CHECK(adj.n == 5);
    CHECK(adj.degree(0) == 2);
    CHECK(adj.degree(4) == 0);
    CHECK(adj.adjacent(0, 2));
    CHECK_FALSE(adj.adjacent(1, 2));
    for (std::size_t v = 0; v < adj.n; ++v) {
        auto nb = adj.neighbors_of(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (std::size_t i = 0; i < nb.size(); ++i) {
            auto [x, y] = adj.edges[adj.edges_of(v)[i]];
            CHECK(((x == v && y == nb[i]) || (y == v && x == nb[i])));
        }
    }
    CHECK(graph_from_index_edges(g.nodes(), adj.edges) == g);
}

TEST_CASE("edge-list round trip keeps isolated nodes") {
    auto g = graph_of({{"A", "B"}, {"B", "C"}}, {"Z", "Y"});
    std::ostringstream out;
    write_edge_list(out, g);
    CHECK(out.str() == "A\tB\nB\tC\n#nodes\nY\nZ\n");
    std::istringstream in(out.str());
    CHECK(read_edge_list(in) == g);

    std::istringstream bad("A\tB\tC\n");
    CHECK_THROWS_AS(read_edge_list(bad), DataError);
}
