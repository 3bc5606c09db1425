#pragma once

#include "gig/geneid.hpp"
#include "gig/gpml.hpp"
#include "gig/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace gig {

// Gene -> pathway membership. Genes listed with no pathway keep an empty set.
class GenePathwayIndex {
public:
    void add(const GeneSymbol& gene, const std::string& wpid);
    void add_gene(const GeneSymbol& gene);

    const std::map<GeneSymbol, std::set<std::string>>& entries() const noexcept { return entries_; }

private:
    std::map<GeneSymbol, std::set<std::string>> entries_;
};

// gene<TAB>wpid lines; an empty wpid column records a gene with no pathways.
GenePathwayIndex read_pathway_index(std::istream& in);
GenePathwayIndex load_pathway_index(const std::filesystem::path& path);

std::set<std::string> pathways_for_gene(const GeneSymbol& gene, const GenePathwayIndex& index);

// Union of per-gene pathway sets. Genes without any pathway are appended to
// unmatched when it is non-null.
std::set<std::string> pathway_set_for_sample(const GeneSet& genes, const GenePathwayIndex& index,
                                             std::vector<GeneSymbol>* unmatched = nullptr);

struct PathwayClientOptions {
    // The GPML for WPn is fetched from <base_url>/WPn/WPn.gpml.
    std::string base_url = "https://www.wikipathways.org/wikipathways-assets/pathways";
    int timeout_seconds = 60;
};

// GIG_PATHWAY_CACHE, else $HOME/.cache/gig/pathways.
std::filesystem::path default_pathway_cache_dir();

// Returns <cache_dir>/<wpid>.gpml. When absent and online, downloads it and
// writes the cache file atomically first. Offline misses raise MissingPathwayError.
std::string fetch_gpml(const std::string& wpid, const std::filesystem::path& cache_dir, bool online,
                       const PathwayClientOptions& options = {});

// The measured gene universe a pathway graph is restricted to, with a digest
// used as the memoization key.
struct MeasuredGenes {
    GeneSet genes;
    std::string digest;

    explicit MeasuredGenes(GeneSet g);
};

// Builds processed pathway graphs once per (wpid, measured universe) and
// shares them across samples. Safe to call from parallel workers.
class PathwayGraphStore {
public:
    PathwayGraphStore(GenePathwayIndex index, GeneIdMapping mapping, std::filesystem::path cache_dir,
                      bool online, PathwayClientOptions options = {});

    const GenePathwayIndex& index() const noexcept { return index_; }

    std::shared_ptr<const MolecularGraph> pathway_graph(const std::string& wpid,
                                                        const MeasuredGenes& measured);

    std::size_t memoized_graphs() const;

private:
    std::shared_ptr<const PathwayDocument> document(const std::string& wpid);

    GenePathwayIndex index_;
    GeneIdMapping mapping_;
    std::filesystem::path cache_dir_;
    bool online_;
    PathwayClientOptions options_;

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const PathwayDocument>> documents_;
    std::map<std::pair<std::string, std::string>, std::shared_ptr<const MolecularGraph>> graphs_;
};

} // namespace gig
