#pragma once

#include "gig/assembly.hpp"
#include "gig/expression.hpp"
#include "gig/graphlets.hpp"
#include "gig/nullmodels.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gig {

struct PipelineConfig {
    std::filesystem::path matrix;
    Orientation orientation = Orientation::genes_in_rows;
    std::filesystem::path mapping;
    std::filesystem::path pathway_index;
    std::filesystem::path labels;
    std::filesystem::path cache_dir;  // GPML cache; empty means GIG_PATHWAY_CACHE or the default
    std::size_t hvg_n = 10000;
    bool log1p = true;
    bool protein_coding_only = true;
    double epsilon = 1e-8;
    double tau = 80.0;
    std::size_t k = 50;
    double split_fraction = 0.8;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = "gig-out";
    bool offline = true;
};

// Flat key = value TOML. Relative paths resolve against the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

// Throws UsageError on out-of-range values, DataError on missing input files.
void validate_config(const PipelineConfig& cfg, bool need_inputs);

// Stable JSON form, used for the run log checksum and the export manifest.
nlohmann::json config_json(const PipelineConfig& cfg);

// Layout under output_dir.
std::filesystem::path processed_matrix_path(const PipelineConfig& cfg);
std::filesystem::path graphs_dir(const PipelineConfig& cfg);
std::filesystem::path dataset_dir(const PipelineConfig& cfg);

struct PreprocessSummary {
    std::size_t raw_rows = 0;
    std::size_t retained_genes = 0;
    std::size_t samples = 0;
    CanonicalizationReport report;
};
PreprocessSummary run_preprocess(const PipelineConfig& cfg);

struct GraphBuildSummary {
    std::size_t built = 0;
    std::vector<Exclusion> exclusions;
};

// One graph per sample from the processed matrix, written as graphs/<sample>.tsv
// plus graphs/exclusions.tsv.
GraphBuildSummary run_build_graphs(const PipelineConfig& cfg);

DatasetManifest run_export(const PipelineConfig& cfg);

// Reads every <id>.tsv edge list in dir (exclusions.tsv is skipped), sorted by id.
std::map<std::string, MolecularGraph> load_graph_dir(const std::filesystem::path& dir);
void save_graph_dir(const std::filesystem::path& dir, const std::map<std::string, MolecularGraph>& graphs);

enum class NullKind { erdos_renyi, degree_preserving, fully_connected };
NullKind parse_null_kind(const std::string& s);

// One control per graph, seeded by the run seed mixed with the graph id. Graphs
// run in parallel.
std::map<std::string, MolecularGraph> make_controls(const std::map<std::string, MolecularGraph>& graphs, NullKind kind,
                                                    std::uint64_t seed, std::uint64_t factor);

std::vector<OrbitSignature> orbit_signatures(const std::map<std::string, MolecularGraph>& graphs);
void write_orbit_table(std::ostream& out, const std::vector<OrbitSignature>& sigs);
std::vector<OrbitSignature> read_orbit_table(std::istream& in);

void write_comparison(std::ostream& out, const std::vector<OrbitComparison>& rows);
void write_group_zscores(std::ostream& out, const GroupZScores& z);

// Entry point for the gig executable. Returns the process exit code:
// 0 ok, 1 data error, 2 usage error, 3 environment error.
int run_cli(int argc, const char* const* argv);

} // namespace gig
