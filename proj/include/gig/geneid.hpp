#pragma once

#include "gig/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gig {

// Removes a trailing ".<digits>" from Ensembl gene accessions (ENSG + digits).
// Anything else is returned unchanged.
std::string strip_ensembl_version(std::string_view id);

// Turns a raw identifier into a namespace-qualified key ("ensembl:ENSG...",
// "entrez:7157", "uniprot:P04637", "label:TP53"). Already-qualified ids are
// normalized; bare ids that look like Ensembl genes become ensembl:, anything
// else is treated as a label.
std::string qualify_identifier(std::string_view raw);

struct MappingEntry {
    GeneSymbol symbol;
    bool protein_coding = false;
};

// Source identifier -> HGNC symbol table. Many source ids may map to one symbol.
class GeneIdMapping {
public:
    // Throws DataError when the qualified key is already present with a
    // different target.
    void insert(std::string_view source_id, const GeneSymbol& symbol, bool protein_coding);

    const MappingEntry* find(std::string_view source_id) const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<std::string, MappingEntry>& entries() const noexcept { return entries_; }

    friend bool operator==(const GeneIdMapping& x, const GeneIdMapping& y);

private:
    std::map<std::string, MappingEntry> entries_;
};

// source_id<TAB>hgnc_symbol<TAB>protein_coding(0|1); an optional header row
// starting with "source_id" is skipped.
GeneIdMapping read_mapping_table(std::istream& in);
GeneIdMapping load_mapping_table(const std::filesystem::path& path);

std::optional<GeneSymbol> canonicalize(std::string_view id, const GeneIdMapping& table,
                                       bool require_protein_coding);

// Annotation-service client (MyGene.info query protocol).
struct AnnotationClientOptions {
    std::string base_url = "https://mygene.info/v3";
    std::size_t batch_size = 1000;
    int timeout_seconds = 30;
};

// GIG_CACHE_DIR, else $HOME/.cache/gig/annotations.
std::filesystem::path default_annotation_cache_dir();

// Resolves ids through the cache first and queries the service only for the
// remainder. Every service response is stored as one JSON document per batch
// under cache_dir, so a later offline load_annotation_cache reproduces the result.
GeneIdMapping resolve_batch_online(const std::vector<std::string>& ids,
                                   const std::filesystem::path& cache_dir,
                                   const AnnotationClientOptions& options = {});

// Offline view of everything the client has cached.
GeneIdMapping load_annotation_cache(const std::filesystem::path& cache_dir);

} // namespace gig
