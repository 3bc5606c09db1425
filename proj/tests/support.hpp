#pragma once

#include "gig/graph.hpp"
#include "gig/io.hpp"
#include "gig/random.hpp"

#include <atomic>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

namespace testing {

inline gig::MolecularGraph graph_of(std::initializer_list<std::pair<const char*, const char*>> edges,
                                    std::initializer_list<const char*> extra_nodes = {}) {
    std::vector<gig::GeneSymbol> nodes;
    for (const auto* n : extra_nodes) nodes.emplace_back(n);
    std::vector<gig::Edge> es;
    for (auto [a, b] : edges) es.push_back(gig::make_edge(gig::GeneSymbol(a), gig::GeneSymbol(b)));
    return gig::MolecularGraph(std::move(nodes), std::move(es));
}

inline std::string node_name(std::size_t i) {
    std::string s = "N";
    if (i < 100) s += '0';
    if (i < 10) s += '0';
    return s + std::to_string(i);
}

// Uniform double in [0, 1).
inline double unit(gig::Rng& rng) { return static_cast<double>(rng.below(std::uint64_t{1} << 53)) / 9007199254740992.0; }

// G(n, p) with every node present, for property tests.
inline gig::MolecularGraph random_graph(std::size_t n, double p, gig::Rng& rng) {
    std::vector<gig::GeneSymbol> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(node_name(i));
    std::vector<gig::Edge> edges;
    const auto scale = std::uint64_t{1} << 30;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (static_cast<double>(rng.below(scale)) / static_cast<double>(scale) < p)
                edges.push_back(gig::make_edge(nodes[i], nodes[j]));
    return gig::MolecularGraph(nodes, std::move(edges));
}

inline gig::MolecularGraph complete_graph(std::size_t n) {
    std::vector<gig::GeneSymbol> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(node_name(i));
    std::vector<gig::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back(gig::make_edge(nodes[i], nodes[j]));
    return gig::MolecularGraph(nodes, std::move(edges));
}

inline gig::MolecularGraph cycle_graph(std::size_t n) {
    std::vector<gig::GeneSymbol> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(node_name(i));
    std::vector<gig::Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.push_back(gig::make_edge(nodes[i], nodes[(i + 1) % n]));
    return gig::MolecularGraph(nodes, std::move(edges));
}

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "gig") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

#ifdef GIG_FIXTURES
inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(GIG_FIXTURES) / rel; }
#endif

} // namespace testing
