#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gig {

// Canonical HGNC gene symbol: trimmed, uppercased, non-empty.
class GeneSymbol {
public:
    explicit GeneSymbol(std::string_view raw);

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const GeneSymbol&, const GeneSymbol&) = default;
    friend auto operator<=>(const GeneSymbol&, const GeneSymbol&) = default;

private:
    std::string value_;
};

// Returns the normalized form of raw, or an empty string when nothing is left after trimming.
std::string normalize_symbol(std::string_view raw);

using GeneSet = std::set<GeneSymbol>;

// Unordered pair stored with the lexicographically smaller symbol first.
struct Edge {
    GeneSymbol a;
    GeneSymbol b;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph over gene symbols. Nodes are kept in lexicographic
// order and edges in canonical order, so two graphs with the same sets compare
// equal and serialize identically. Immutable once constructed.
class MolecularGraph {
public:
    MolecularGraph() = default;

    // Throws DataError on a self-loop. Duplicate edges and nodes collapse;
    // edge endpoints missing from nodes are added.
    MolecularGraph(std::vector<GeneSymbol> nodes, std::vector<Edge> edges);

    const std::vector<GeneSymbol>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    bool contains(const GeneSymbol& g) const;
    bool has_edge(const GeneSymbol& x, const GeneSymbol& y) const;

    // Position of g in nodes(), or -1.
    std::ptrdiff_t index_of(const GeneSymbol& g) const;

    friend bool operator==(const MolecularGraph&, const MolecularGraph&) = default;

private:
    std::vector<GeneSymbol> nodes_;
    std::vector<Edge> edges_;
};

// Mutable accumulation buffer. Unlike MolecularGraph it tolerates self-loops,
// which appear when two pathway elements collapse onto one symbol.
class GraphBuilder {
public:
    void add_node(const GeneSymbol& g);
    void add_edge(const GeneSymbol& x, const GeneSymbol& y);

    const std::set<GeneSymbol>& nodes() const noexcept { return nodes_; }
    const std::set<std::pair<GeneSymbol, GeneSymbol>>& edges() const noexcept { return edges_; }

private:
    std::set<GeneSymbol> nodes_;
    std::set<std::pair<GeneSymbol, GeneSymbol>> edges_;
};

Edge make_edge(const GeneSymbol& x, const GeneSymbol& y);

MolecularGraph merge_graphs(std::span<const MolecularGraph> graphs);
MolecularGraph strip_self_loops(const GraphBuilder& buffer);
MolecularGraph strip_self_loops(const MolecularGraph& g);
MolecularGraph restrict_to_genes(const MolecularGraph& g, const GeneSet& keep);

// Integer view of a graph for the numeric kernels: node i is g.nodes()[i],
// neighbor lists are sorted, and edge ids follow g.edges() order.
struct Adjacency {
    std::size_t n = 0;
    std::vector<std::uint32_t> offsets;        // n + 1 entries
    std::vector<std::uint32_t> neighbors;      // 2|E| entries
    std::vector<std::uint32_t> incident_edge;  // parallel to neighbors
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    std::span<const std::uint32_t> neighbors_of(std::size_t v) const {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
    }
    std::span<const std::uint32_t> edges_of(std::size_t v) const {
        return {incident_edge.data() + offsets[v], incident_edge.data() + offsets[v + 1]};
    }
    std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
    bool adjacent(std::size_t x, std::size_t y) const;
};

Adjacency build_adjacency(const MolecularGraph& g);

// Rebuilds a symbol graph from integer edges indexing into nodes.
MolecularGraph graph_from_index_edges(const std::vector<GeneSymbol>& nodes,
                                      std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

// Edge-list text: one "A<TAB>B" line per edge, then a "#nodes" header followed
// by the degree-0 nodes one per line.
void write_edge_list(std::ostream& out, const MolecularGraph& g);
MolecularGraph read_edge_list(std::istream& in);
void save_edge_list(const std::filesystem::path& path, const MolecularGraph& g);
MolecularGraph load_edge_list(const std::filesystem::path& path);

} // namespace gig
