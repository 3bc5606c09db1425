#include "gig/expression.hpp"
#include "gig/graph.hpp"
#include "gig/graphlets.hpp"
#include "gig/parallel.hpp"
#include "gig/random.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

gig::MolecularGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    gig::Rng rng(seed);
    std::vector<gig::GeneSymbol> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.emplace_back("G" + std::to_string(i));
    std::vector<gig::Edge> edges;
    const std::uint64_t scale = 1u << 30;
    const auto cut = static_cast<std::uint64_t>(p * static_cast<double>(scale));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.below(scale) < cut) edges.push_back(gig::make_edge(nodes[i], nodes[j]));
    return gig::MolecularGraph(nodes, std::move(edges));
}

gig::DenseMatrix random_z(std::size_t genes, std::size_t samples) {
    gig::Rng rng(7);
    gig::DenseMatrix m(genes, samples);
    for (std::size_t r = 0; r < genes; ++r)
        for (std::size_t c = 0; c < samples; ++c) m(r, c) = static_cast<double>(rng.below(1u << 20)) / (1u << 19) - 1.0;
    return m;
}

void orbits_parallel(benchmark::State& state) {
    auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.05, 1);
    auto adj = gig::build_adjacency(g);
    for (auto _ : state) benchmark::DoNotOptimize(gig::count_orbits(adj));
}

void orbits_serial(benchmark::State& state) {
    auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.05, 1);
    auto adj = gig::build_adjacency(g);
    gig::SerialScope serial;
    for (auto _ : state) benchmark::DoNotOptimize(gig::count_orbits(adj));
}

void orbits_brute_force(benchmark::State& state) {
    auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.2, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gig::brute_force_orbits(g));
}

void coexpression_topk(benchmark::State& state) {
    auto z = random_z(static_cast<std::size_t>(state.range(0)), 200);
    for (auto _ : state) benchmark::DoNotOptimize(gig::pcc_topk_feature(z, 50));
}

void coexpression_dense(benchmark::State& state) {
    auto z = random_z(static_cast<std::size_t>(state.range(0)), 200);
    for (auto _ : state) benchmark::DoNotOptimize(gig::pcc_node_feature(gig::pcc_matrix(z), 50));
}

} // namespace

BENCHMARK(orbits_parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(orbits_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(orbits_brute_force)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(coexpression_topk)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(coexpression_dense)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
