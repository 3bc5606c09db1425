#include "gig/nullmodels.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "gig/random.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gig {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (b < a) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// k-th unordered pair (i < j) of n items in row-major order.
std::pair<std::uint32_t, std::uint32_t> pair_at(std::uint64_t k, std::uint64_t n) {
    // Row i starts at offset i*n - i*(i+1)/2 (pairs before it).
    auto row_start = [n](std::uint64_t i) { return i * n - i * (i + 1) / 2; };
    auto guess = static_cast<double>(2 * n - 1) -
                 std::sqrt(static_cast<double>(2 * n - 1) * static_cast<double>(2 * n - 1) - 8.0 * static_cast<double>(k));
    auto i = static_cast<std::uint64_t>(std::max(0.0, std::floor(guess / 2.0)));
    while (i > 0 && row_start(i) > k) --i;
    while (i + 1 < n && row_start(i + 1) <= k) ++i;
    auto j = i + 1 + (k - row_start(i));
    return {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
}

} // namespace

MolecularGraph er_rewire(const MolecularGraph& g, const RewireConfig& cfg) {
    const std::uint64_t n = g.node_count();
    if (n < 2) throw DataError("Erdos-Renyi control needs at least two nodes");
    const std::uint64_t total = n * (n - 1) / 2;
    const std::uint64_t m = g.edge_count();
    if (m > total) throw DataError("edge count exceeds the number of node pairs");

    // Floyd's sampling of m distinct pair indices.
    Rng rng(cfg.seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t j = total - m; j < total; ++j) {
        auto t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> picks(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(m);
    for (auto k : picks) edges.push_back(pair_at(k, n));
    return graph_from_index_edges(g.nodes(), edges);
}

MolecularGraph degree_preserving_rewire(const MolecularGraph& g, const RewireConfig& cfg) {
    const auto adj = build_adjacency(g);
    auto edges = adj.edges;
    const std::uint64_t m = edges.size();
    if (m < 2) return g;

    std::unordered_set<std::uint64_t> present;
    present.reserve(m * 2);
    for (auto [a, b] : edges) present.insert(pair_key(a, b));

    Rng rng(cfg.seed);
    const std::uint64_t attempts = cfg.swap_attempt_factor * m;
    for (std::uint64_t t = 0; t < attempts; ++t) {
        auto i = rng.below(m);
        auto j = rng.below(m);
        bool flip = rng.below(2) == 1;
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (flip) std::swap(c, d);
        // (a,b),(c,d) -> (a,d),(c,b)
        if (a == c || a == d || b == c || b == d) continue;
        auto ad = pair_key(a, d);
        auto cb = pair_key(c, b);
        if (present.contains(ad) || present.contains(cb)) continue;
        present.erase(pair_key(a, b));
        present.erase(pair_key(c, d));
        present.insert(ad);
        present.insert(cb);
        edges[i] = {std::min(a, d), std::max(a, d)};
        edges[j] = {std::min(c, b), std::max(c, b)};
    }
    return graph_from_index_edges(g.nodes(), edges);
}

MolecularGraph fully_connected(const GeneSet& nodes) {
    if (nodes.size() < 2) throw DataError("a fully connected control needs at least two nodes");
    std::vector<GeneSymbol> list(nodes.begin(), nodes.end());
    std::vector<Edge> edges;
    edges.reserve(list.size() * (list.size() - 1) / 2);
    for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j) edges.push_back(Edge{list[i], list[j]});
    return MolecularGraph(std::move(list), std::move(edges));
}

std::uint64_t control_seed(std::uint64_t seed, std::string_view graph_id) {
    return mix_seed(seed, stable_hash64(graph_id));
}

} // namespace gig
