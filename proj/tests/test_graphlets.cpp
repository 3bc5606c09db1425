#include "gig/errors.hpp"
#include "gig/graphlets.hpp"
#include "gig/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace gig;
using testing::graph_of;

namespace {

OrbitVector orbit(std::initializer_list<std::pair<std::size_t, std::int64_t>> nonzero) {
    OrbitVector v{};
    for (auto [k, c] : nonzero) v[k] = c;
    return v;
}

std::int64_t sum_orbit(const std::vector<OrbitVector>& o, std::size_t k) {
    std::int64_t s = 0;
    for (const auto& v : o) s += v[k];
    return s;
}

// Independent motif counters for the sum identities.
std::int64_t triangles(const MolecularGraph& g) {
    std::int64_t t = 0;
    const auto& n = g.nodes();
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = i + 1; j < n.size(); ++j)
            for (std::size_t k = j + 1; k < n.size(); ++k)
                t += g.has_edge(n[i], n[j]) && g.has_edge(n[j], n[k]) && g.has_edge(n[i], n[k]);
    return t;
}

std::int64_t four_cliques(const MolecularGraph& g) {
    std::int64_t t = 0;
    const auto& n = g.nodes();
    auto e = [&](std::size_t a, std::size_t b) { return g.has_edge(n[a], n[b]); };
    for (std::size_t a = 0; a < n.size(); ++a)
        for (std::size_t b = a + 1; b < n.size(); ++b)
            for (std::size_t c = b + 1; c < n.size(); ++c)
                for (std::size_t d = c + 1; d < n.size(); ++d)
                    t += e(a, b) && e(a, c) && e(a, d) && e(b, c) && e(b, d) && e(c, d);
    return t;
}

} // namespace

TEST_CASE("triangle: every node has degree 2 and one triangle") {
    auto g = graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}});
    for (const auto& v : count_orbits(g)) CHECK(v == orbit({{0, 2}, {3, 1}}));
}

TEST_CASE("K4: three triangles and one 4-clique per node") {
    auto g = testing::complete_graph(4);
    for (const auto& v : count_orbits(g)) CHECK(v == orbit({{0, 3}, {3, 3}, {14, 1}}));
}

TEST_CASE("path a-b-c-d") {
    auto g = graph_of({{"A", "B"}, {"B", "C"}, {"C", "D"}});
    auto o = count_orbits(g);
    CHECK(o[0] == orbit({{0, 1}, {1, 1}, {4, 1}}));
    CHECK(o[1] == orbit({{0, 2}, {1, 1}, {2, 1}, {5, 1}}));
    CHECK(o[2] == o[1]);
    CHECK(o[3] == o[0]);
}

TEST_CASE("claw, 4-cycle, paw and diamond orbits") {
    auto claw = count_orbits(graph_of({{"C", "X"}, {"C", "Y"}, {"C", "Z"}}));
    CHECK(claw[0] == orbit({{0, 3}, {2, 3}, {7, 1}}));
    CHECK(claw[1] == orbit({{0, 1}, {1, 2}, {6, 1}}));

    for (const auto& v : count_orbits(testing::cycle_graph(4))) CHECK(v == orbit({{0, 2}, {1, 2}, {2, 1}, {8, 1}}));

    // paw: triangle A-B-C with tail C-D
    auto paw = count_orbits(graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}, {"C", "D"}}));
    CHECK(paw[0][10] == 1);
    CHECK(paw[1][10] == 1);
    CHECK(paw[2][11] == 1);
    CHECK(paw[3][9] == 1);

    // diamond: K4 minus edge A-D
    auto diamond = count_orbits(graph_of({{"A", "B"}, {"A", "C"}, {"B", "C"}, {"B", "D"}, {"C", "D"}}));
    CHECK(diamond[0][12] == 1);
    CHECK(diamond[3][12] == 1);
    CHECK(diamond[1][13] == 1);
    CHECK(diamond[2][13] == 1);
}

TEST_CASE("brute force agrees on small named graphs") {
    for (const auto& g : {testing::complete_graph(3), testing::complete_graph(4), testing::complete_graph(6),
                          testing::cycle_graph(6), graph_of({{"A", "B"}, {"B", "C"}, {"C", "D"}}),
                          graph_of({{"C", "X"}, {"C", "Y"}, {"C", "Z"}})}) {
        CHECK(count_orbits(g) == brute_force_orbits(g));
    }
}

TEST_CASE("empty and edgeless graphs give zero vectors") {
    CHECK(count_orbits(MolecularGraph{}).empty());
    auto g = graph_of({}, {"A", "B", "C"});
    for (const auto& v : brute_force_orbits(g)) CHECK(v == OrbitVector{});
    for (const auto& v : count_orbits(g)) CHECK(v == OrbitVector{});
}

TEST_CASE("fast counts match the oracle on seeded random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 4 + rng.below(27);
        double p = 0.1 + 0.4 * static_cast<double>(rng.below(1001)) / 1000.0;
        auto g = testing::random_graph(n, p, rng);
        auto fast = count_orbits(g);
        auto slow = brute_force_orbits(g);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t v = 0; v < fast.size(); ++v) CHECK(fast[v] == slow[v]);
        CHECK(sum_orbit(fast, 0) == 2 * static_cast<std::int64_t>(g.edge_count()));
        CHECK(sum_orbit(fast, 3) == 3 * triangles(g));
        CHECK(sum_orbit(fast, 14) == 4 * four_cliques(g));
    }
}

TEST_CASE("serial and parallel counts are identical") {
    Rng rng(5);
    auto g = testing::random_graph(120, 0.12, rng);
    auto par = count_orbits(g);
    std::vector<OrbitVector> ser;
    {
        SerialScope serial;
        ser = count_orbits(g);
    }
    CHECK(par == ser);
}

TEST_CASE("brute force refuses graphs above the cap") {
    Rng rng(1);
    auto g = testing::random_graph(20, 0.2, rng);
    CHECK_THROWS_AS(brute_force_orbits(g, 10), UsageError);
}

TEST_CASE("graph signatures") {
    auto k3 = graph_signature("k3", count_orbits(testing::complete_graph(3)));
    CHECK(k3.means[0] == 2.0);
    CHECK(k3.means[3] == 1.0);
    CHECK(k3.means[1] == 0.0);

    auto p4 = graph_signature("p4", count_orbits(graph_of({{"A", "B"}, {"B", "C"}, {"C", "D"}})));
    CHECK(p4.means[0] == 1.5);

    auto edge = graph_signature("e", count_orbits(graph_of({{"A", "B"}})));
    CHECK(edge.means[0] == 1.0);
    for (std::size_t k = 1; k < orbit_count; ++k) CHECK(edge.means[k] == 0.0);

    // isolated nodes count toward the mean
    auto with_isolated = graph_signature("i", count_orbits(graph_of({{"A", "B"}}, {"C", "D"})));
    CHECK(with_isolated.means[0] == 0.5);

    CHECK_THROWS_AS(graph_signature("none", {}), DataError);
}

TEST_CASE("z-scoring group means") {
    OrbitSignature a{"a", {}}, b{"b", {}}, c{"c", {}};
    a.means[3] = 1.0;
    b.means[3] = 3.0;
    c.means[3] = 3.0;
    a.means[5] = b.means[5] = c.means[5] = 7.0;
    auto z = zscore_signatures({a, b, c}, {{"a", "g1"}, {"b", "g2"}, {"c", "g2"}});
    REQUIRE(z.groups == std::vector<std::string>{"g1", "g2"});
    CHECK(z.z[0][3] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(z.z[1][3] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(z.z[0][5] == 0.0);
    CHECK(z.z[1][0] == 0.0);

    CHECK_THROWS_AS(zscore_signatures({a, b}, {{"a", "g"}, {"b", "g"}}), DataError);
}

TEST_CASE("Mann-Whitney U") {
    SUBCASE("non-overlapping samples give the extreme U") {
        std::vector<double> lo(10, 0.0), hi;
        for (int i = 1; i <= 10; ++i) hi.push_back(i);
        auto r = mann_whitney_u(lo, hi);
        CHECK(r.u == 0.0);
        CHECK(mann_whitney_u(hi, lo).u == 100.0);
        CHECK(r.p_value < 1e-3);
    }
    SUBCASE("identical samples sit at the null center") {
        std::vector<double> x{1, 2, 3, 4, 5};
        auto r = mann_whitney_u(x, x);
        CHECK(r.u == 12.5);
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    SUBCASE("all values tied") {
        auto r = mann_whitney_u({2, 2, 2}, {2, 2});
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("matches a hand-computed normal approximation") {
        // ranks of a = {1, 2, 4}: R = 7, U = 1; n = 3 + 3, mu = 4.5, var = 9*7/12 = 5.25
        auto r = mann_whitney_u({1, 2, 4}, {3, 5, 6});
        CHECK(r.u == 1.0);
        double z = (3.5 - 0.5) / std::sqrt(5.25);
        CHECK(r.z == doctest::Approx(-z));
        CHECK(r.p_value == doctest::Approx(std::erfc(z / std::sqrt(2.0))));
    }
}

TEST_CASE("compare_groups ranks the separating orbit first") {
    std::vector<OrbitSignature> sigs;
    std::map<std::string, std::string> labels;
    for (int i = 0; i < 20; ++i) {
        OrbitSignature s;
        s.graph_id = "g" + std::to_string(i);
        for (std::size_t k = 0; k < orbit_count; ++k) s.means[k] = static_cast<double>((i * 7 + k) % 5);
        s.means[3] = i < 10 ? 0.0 : 1.0 + i;
        sigs.push_back(s);
        labels[s.graph_id] = i < 10 ? "localized" : "metastatic";
    }
    auto rows = compare_groups(sigs, labels);
    REQUIRE(rows.size() == orbit_count);
    CHECK(rows.front().orbit == 3);
    CHECK(rows.front().test.u == 0.0);
    CHECK(rows.front().a.group == "localized");
    CHECK(rows.front().a.median == 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].test.p_value <= rows[i].test.p_value);
    for (const auto& r : rows) CHECK((r.test.p_value >= 0.0 && r.test.p_value <= 1.0));

    labels["g0"] = "third";
    CHECK_THROWS_AS(compare_groups(sigs, labels), DataError);
}
