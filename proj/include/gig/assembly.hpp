#pragma once

#include "gig/expression.hpp"
#include "gig/graph.hpp"
#include "gig/pathway_store.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gig {

// Symbol -> index, 1..G over the sorted symbols. Index 0 is reserved for unknown genes.
class GeneVocabulary {
public:
    static constexpr std::int64_t unknown = 0;

    GeneVocabulary() = default;
    explicit GeneVocabulary(const std::vector<GeneSymbol>& genes);

    std::int64_t index_of(const GeneSymbol& g) const;
    const std::vector<GeneSymbol>& symbols() const noexcept { return symbols_; }  // position i has index i+1
    std::size_t size() const noexcept { return symbols_.size() + 1; }

private:
    std::vector<GeneSymbol> symbols_;
};

struct Exclusion {
    std::string sample_id;
    std::string reason;  // "no-pathways", "too-small" or "no-edges"
};

using PatientGraphResult = std::variant<MolecularGraph, Exclusion>;

// Union of the sample's processed pathway graphs. Samples whose graph has
// fewer than two nodes or no edges come back as an Exclusion.
PatientGraphResult build_patient_graph(const std::string& sample_id, const GeneSet& dysregulated,
                                       PathwayGraphStore& store, const MeasuredGenes& measured,
                                       std::vector<GeneSymbol>* unmatched = nullptr);

struct PatientGraphRecord {
    std::string sample_id;
    MolecularGraph graph;
    DenseMatrix node_features;  // |V| x 2: [z, c] in graph node order
    std::vector<std::int64_t> gene_indices;
    int label = 0;
};

using FeatureLookup = std::map<GeneSymbol, double>;

// Throws std::logic_error when a graph node has no feature (cannot happen when
// the graph was restricted to the measured universe).
PatientGraphRecord assemble_record(const std::string& sample_id, const MolecularGraph& graph,
                                   const FeatureLookup& z, const FeatureLookup& c,
                                   const GeneVocabulary& vocab, int label);

// Classes sorted by name; code = position.
struct LabelEncoding {
    std::vector<std::string> classes;
    std::map<std::string, int> codes;  // sample -> class code
};

LabelEncoding encode_labels(const std::map<std::string, std::string>& sample_classes);

// sample_id<TAB>class lines; optional "sample_id" header.
std::map<std::string, std::string> load_labels(const std::filesystem::path& path);

struct SplitSpec {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::uint64_t seed = 0;
};

// Per-class seeded shuffle; each class puts round(frac * n_c) samples in train,
// clamped to [1, n_c - 1] when n_c >= 2. Singleton classes go to train.
SplitSpec stratified_split(const std::map<std::string, int>& labels, double frac, std::uint64_t seed);

struct ClassWeights {
    std::vector<double> weights;
    std::vector<std::size_t> class_counts;
};

// w_c = (1/n_c) / (sum_j 1/n_j) * C. Throws DataError when a class is absent.
ClassWeights class_weights(const std::vector<int>& train_labels, int num_classes);

struct DatasetManifest {
    std::map<std::string, std::string> files;  // relative path -> sha256
    nlohmann::json document;
};

struct ExportMetadata {
    std::vector<std::string> classes;
    std::vector<Exclusion> exclusions;
    nlohmann::json parameters = nlohmann::json::object();
};

// Writes the dataset layout (manifest.json, vocab.tsv, split.json,
// class_weights.tsv, exclusions.tsv, samples/<id>.{nodes.tsv,edges.tsv,label})
// and returns the manifest. Output is byte-stable for fixed inputs.
DatasetManifest export_dataset(const std::vector<PatientGraphRecord>& records, const SplitSpec& split,
                               const ClassWeights& weights, const GeneVocabulary& vocab,
                               const std::filesystem::path& out_dir, const ExportMetadata& meta = {});

} // namespace gig
