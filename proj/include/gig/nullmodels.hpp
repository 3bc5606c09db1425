#pragma once

#include "gig/graph.hpp"

#include <cstdint>
#include <string_view>

namespace gig {

struct RewireConfig {
    std::uint64_t seed = 0;
    std::uint64_t swap_attempt_factor = 10;  // attempts = factor * |E|
};

// G(n, m) resample: same nodes, |E| edges drawn uniformly without replacement
// from all unordered pairs.
MolecularGraph er_rewire(const MolecularGraph& g, const RewireConfig& cfg);

// factor * |E| double-edge swap attempts; every node keeps its degree.
MolecularGraph degree_preserving_rewire(const MolecularGraph& g, const RewireConfig& cfg);

// Complete graph on the given nodes (at least two).
MolecularGraph fully_connected(const GeneSet& nodes);

// Seed for the control of one graph: the run seed mixed with the graph id.
std::uint64_t control_seed(std::uint64_t seed, std::string_view graph_id);

} // namespace gig
