#include "gig/graph.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gig {

std::string normalize_symbol(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out(raw.substr(begin, end - begin));
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

GeneSymbol::GeneSymbol(std::string_view raw) : value_(normalize_symbol(raw)) {
    if (value_.empty()) throw DataError("empty gene symbol");
}

Edge make_edge(const GeneSymbol& x, const GeneSymbol& y) {
    if (y < x) return Edge{y, x};
    return Edge{x, y};
}

MolecularGraph::MolecularGraph(std::vector<GeneSymbol> nodes, std::vector<Edge> edges) {
    for (auto& e : edges) {
        if (e.a == e.b) throw DataError("self-loop on " + e.a.str());
        if (e.b < e.a) std::swap(e.a, e.b);
        nodes.push_back(e.a);
        nodes.push_back(e.b);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    nodes_ = std::move(nodes);
    edges_ = std::move(edges);
}

bool MolecularGraph::contains(const GeneSymbol& g) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), g);
}

bool MolecularGraph::has_edge(const GeneSymbol& x, const GeneSymbol& y) const {
    if (x == y) return false;
    return std::binary_search(edges_.begin(), edges_.end(), make_edge(x, y));
}

std::ptrdiff_t MolecularGraph::index_of(const GeneSymbol& g) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), g);
    if (it == nodes_.end() || *it != g) return -1;
    return it - nodes_.begin();
}

void GraphBuilder::add_node(const GeneSymbol& g) { nodes_.insert(g); }

void GraphBuilder::add_edge(const GeneSymbol& x, const GeneSymbol& y) {
    nodes_.insert(x);
    nodes_.insert(y);
    if (y < x)
        edges_.emplace(y, x);
    else
        edges_.emplace(x, y);
}

MolecularGraph merge_graphs(std::span<const MolecularGraph> graphs) {
    std::vector<GeneSymbol> nodes;
    std::vector<Edge> edges;
    for (const auto& g : graphs) {
        nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
        edges.insert(edges.end(), g.edges().begin(), g.edges().end());
    }
    return MolecularGraph(std::move(nodes), std::move(edges));
}

MolecularGraph strip_self_loops(const GraphBuilder& buffer) {
    std::vector<GeneSymbol> nodes(buffer.nodes().begin(), buffer.nodes().end());
    std::vector<Edge> edges;
    for (const auto& [x, y] : buffer.edges()) {
        if (x != y) edges.push_back(Edge{x, y});
    }
    return MolecularGraph(std::move(nodes), std::move(edges));
}

MolecularGraph strip_self_loops(const MolecularGraph& g) { return g; }

MolecularGraph restrict_to_genes(const MolecularGraph& g, const GeneSet& keep) {
    std::vector<GeneSymbol> nodes;
    for (const auto& v : g.nodes()) {
        if (keep.contains(v)) nodes.push_back(v);
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (keep.contains(e.a) && keep.contains(e.b)) edges.push_back(e);
    }
    return MolecularGraph(std::move(nodes), std::move(edges));
}

bool Adjacency::adjacent(std::size_t x, std::size_t y) const {
    if (degree(y) < degree(x)) std::swap(x, y);
    auto list = neighbors_of(x);
    return std::binary_search(list.begin(), list.end(), static_cast<std::uint32_t>(y));
}

Adjacency build_adjacency(const MolecularGraph& g) {
    Adjacency adj;
    adj.n = g.node_count();
    adj.offsets.assign(adj.n + 1, 0);
    adj.edges.reserve(g.edge_count());
    for (const auto& e : g.edges()) {
        auto a = static_cast<std::uint32_t>(g.index_of(e.a));
        auto b = static_cast<std::uint32_t>(g.index_of(e.b));
        adj.edges.emplace_back(a, b);
        ++adj.offsets[a + 1];
        ++adj.offsets[b + 1];
    }
    for (std::size_t v = 0; v < adj.n; ++v) adj.offsets[v + 1] += adj.offsets[v];

    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots(2 * adj.edges.size());
    std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (std::uint32_t id = 0; id < adj.edges.size(); ++id) {
        auto [a, b] = adj.edges[id];
        slots[fill[a]++] = {b, id};
        slots[fill[b]++] = {a, id};
    }
    for (std::size_t v = 0; v < adj.n; ++v) {
        std::sort(slots.begin() + adj.offsets[v], slots.begin() + adj.offsets[v + 1]);
    }
    adj.neighbors.reserve(slots.size());
    adj.incident_edge.reserve(slots.size());
    for (auto [w, id] : slots) {
        adj.neighbors.push_back(w);
        adj.incident_edge.push_back(id);
    }
    return adj;
}

MolecularGraph graph_from_index_edges(const std::vector<GeneSymbol>& nodes,
                                      std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (auto [a, b] : edges) out.push_back(make_edge(nodes.at(a), nodes.at(b)));
    return MolecularGraph(nodes, std::move(out));
}

void write_edge_list(std::ostream& out, const MolecularGraph& g) {
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& e : g.edges()) {
        out << e.a.str() << '\t' << e.b.str() << '\n';
        touched[static_cast<std::size_t>(g.index_of(e.a))] = true;
        touched[static_cast<std::size_t>(g.index_of(e.b))] = true;
    }
    out << "#nodes\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!touched[i]) out << g.nodes()[i].str() << '\n';
    }
}

MolecularGraph read_edge_list(std::istream& in) {
    std::vector<GeneSymbol> nodes;
    std::vector<Edge> edges;
    bool in_nodes = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "#nodes") {
            in_nodes = true;
            continue;
        }
        if (line.front() == '#') continue;
        if (in_nodes) {
            nodes.emplace_back(line);
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 2)
            throw DataError("edge list line " + std::to_string(lineno) + ": expected 2 columns");
        GeneSymbol a(fields[0]), b(fields[1]);
        if (a == b) throw DataError("edge list line " + std::to_string(lineno) + ": self-loop");
        edges.push_back(make_edge(a, b));
    }
    return MolecularGraph(std::move(nodes), std::move(edges));
}

void save_edge_list(const std::filesystem::path& path, const MolecularGraph& g) {
    std::ostringstream buf;
    write_edge_list(buf, g);
    write_file_atomic(path, buf.str());
}

MolecularGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open edge list");
    return read_edge_list(in);
}

} // namespace gig
