#pragma once

#include "gig/graph.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gig {

inline constexpr std::size_t orbit_count = 15;

// Per-node participation counts in the 2-4 node graphlet orbits, ORCA numbering:
//   o0  edge (degree)            o8  4-cycle
//   o1  3-path end               o9  tailed triangle, tail end
//   o2  3-path middle            o10 tailed triangle, far triangle nodes
//   o3  triangle                 o11 tailed triangle, attachment node
//   o4  4-path end               o12 diamond, degree-2 nodes
//   o5  4-path middle            o13 diamond, degree-3 nodes
//   o6  claw leaf                o14 4-clique
//   o7  claw center
using OrbitVector = std::array<std::int64_t, orbit_count>;

// Orbit vectors aligned with g.nodes(). Uses per-edge triangle counts and the
// linear relations between orbit counts, so the cost is dominated by
// triangle/4-clique enumeration instead of all 4-node subsets. Nodes are
// processed in parallel.
std::vector<OrbitVector> count_orbits(const MolecularGraph& g);
std::vector<OrbitVector> count_orbits(const Adjacency& adj);

// Independent oracle: classifies every 3- and 4-node induced subgraph directly.
// Throws UsageError when the graph has more than node_cap nodes.
std::vector<OrbitVector> brute_force_orbits(const MolecularGraph& g, std::size_t node_cap = 64);

std::map<GeneSymbol, OrbitVector> orbits_by_node(const MolecularGraph& g, const std::vector<OrbitVector>& counts);

struct OrbitSignature {
    std::string graph_id;
    std::array<double, orbit_count> means{};
};

// Mean orbit count over all nodes, isolated nodes included. Throws DataError on an empty graph.
OrbitSignature graph_signature(const std::string& graph_id, const std::vector<OrbitVector>& orbits);

struct GroupZScores {
    std::vector<std::string> groups;  // sorted
    std::vector<std::array<double, orbit_count>> group_means;
    std::vector<std::array<double, orbit_count>> z;
};

// Averages signatures per group, then standardizes each orbit column across
// the group means: (v - mean) / (population sd + epsilon).
GroupZScores zscore_signatures(const std::vector<OrbitSignature>& sigs,
                               const std::map<std::string, std::string>& groups, double epsilon = 1e-8);

struct MannWhitneyResult {
    double u = 0.0;  // U of the first sample
    double z = 0.0;
    double p_value = 1.0;
};

// Two-sided test, normal approximation with tie and continuity correction.
MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

struct GroupStats {
    std::string group;
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
};

struct OrbitComparison {
    std::size_t orbit = 0;
    GroupStats a;
    GroupStats b;
    MannWhitneyResult test;
};

// One row per orbit, sorted by ascending p-value (orbit index breaks ties).
// labels must name exactly two groups; the lexicographically smaller is "a".
std::vector<OrbitComparison> compare_groups(const std::vector<OrbitSignature>& sigs,
                                            const std::map<std::string, std::string>& labels);

} // namespace gig
