#include "gig/pathway_store.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace gig {

namespace {

void check_wpid(const std::string& wpid) {
    bool ok = !wpid.empty() && std::all_of(wpid.begin(), wpid.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
    if (!ok || wpid == "." || wpid == "..") throw DataError("invalid pathway identifier '" + wpid + "'");
}

} // namespace

void GenePathwayIndex::add(const GeneSymbol& gene, const std::string& wpid) {
    if (wpid.empty()) throw DataError("empty pathway id for " + gene.str());
    entries_[gene].insert(wpid);
}

void GenePathwayIndex::add_gene(const GeneSymbol& gene) { entries_[gene]; }

GenePathwayIndex read_pathway_index(std::istream& in) {
    GenePathwayIndex index;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto fields = split(line, '\t');
        if (lineno == 1 && to_lower(trim(fields[0])) == "gene") continue;
        if (fields.size() > 2)
            throw DataError("pathway index line " + std::to_string(lineno) + ": expected 2 columns");
        GeneSymbol gene(fields[0]);
        auto wpid = fields.size() == 2 ? std::string(trim(fields[1])) : std::string{};
        if (wpid.empty())
            index.add_gene(gene);
        else
            index.add(gene, wpid);
    }
    return index;
}

GenePathwayIndex load_pathway_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open pathway index");
    return read_pathway_index(in);
}

std::set<std::string> pathways_for_gene(const GeneSymbol& gene, const GenePathwayIndex& index) {
    auto it = index.entries().find(gene);
    if (it == index.entries().end()) return {};
    return it->second;
}

std::set<std::string> pathway_set_for_sample(const GeneSet& genes, const GenePathwayIndex& index,
                                             std::vector<GeneSymbol>* unmatched) {
    std::set<std::string> out;
    for (const auto& g : genes) {
        auto it = index.entries().find(g);
        if (it == index.entries().end() || it->second.empty()) {
            if (unmatched) unmatched->push_back(g);
            continue;
        }
        out.insert(it->second.begin(), it->second.end());
    }
    return out;
}

std::filesystem::path default_pathway_cache_dir() {
    if (auto dir = env_var("GIG_PATHWAY_CACHE")) return *dir;
    if (auto home = env_var("HOME")) return std::filesystem::path(*home) / ".cache/gig/pathways";
    return ".gig-cache/pathways";
}

std::string fetch_gpml(const std::string& wpid, const std::filesystem::path& cache_dir, bool online,
                       const PathwayClientOptions& options) {
    check_wpid(wpid);
    auto path = cache_dir / (wpid + ".gpml");
    if (std::filesystem::is_regular_file(path)) return read_file(path);
    if (!online) throw MissingPathwayError(wpid);

    auto url = split_url(options.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(options.timeout_seconds);
    client.set_read_timeout(options.timeout_seconds);
    client.set_follow_location(true);
    std::string remote = url.path;
    if (remote.empty() || remote.back() != '/') remote += "/";
    remote += wpid + "/" + wpid + ".gpml";
    auto res = client.Get(remote);
    if (!res) throw DownloadError(wpid, httplib::to_string(res.error()));
    if (res->status != 200) throw DownloadError(wpid, "HTTP " + std::to_string(res->status));

    try {
        std::filesystem::create_directories(cache_dir);
        write_file_atomic(path, res->body);
    } catch (const std::exception&) {
        throw CacheWriteError(wpid, path.string());
    }
    return res->body;
}

MeasuredGenes::MeasuredGenes(GeneSet g) : genes(std::move(g)) {
    std::string joined;
    for (const auto& s : genes) {
        joined += s.str();
        joined.push_back('\n');
    }
    digest = sha256_hex(joined);
}

PathwayGraphStore::PathwayGraphStore(GenePathwayIndex index, GeneIdMapping mapping,
                                     std::filesystem::path cache_dir, bool online,
                                     PathwayClientOptions options)
    : index_(std::move(index)),
      mapping_(std::move(mapping)),
      cache_dir_(std::move(cache_dir)),
      online_(online),
      options_(std::move(options)) {}

std::shared_ptr<const PathwayDocument> PathwayGraphStore::document(const std::string& wpid) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = documents_.find(wpid); it != documents_.end()) return it->second;
    }
    auto doc = std::make_shared<const PathwayDocument>(
        parse_gpml(fetch_gpml(wpid, cache_dir_, online_, options_), wpid));
    std::lock_guard lock(mutex_);
    return documents_.try_emplace(wpid, std::move(doc)).first->second;
}

std::shared_ptr<const MolecularGraph> PathwayGraphStore::pathway_graph(const std::string& wpid,
                                                                        const MeasuredGenes& measured) {
    auto key = std::make_pair(wpid, measured.digest);
    {
        std::lock_guard lock(mutex_);
        if (auto it = graphs_.find(key); it != graphs_.end()) return it->second;
    }
    auto doc = document(wpid);
    auto graph = std::make_shared<const MolecularGraph>(
        build_pathway_graph(*doc, make_table_resolver(mapping_), measured.genes));
    std::lock_guard lock(mutex_);
    return graphs_.try_emplace(key, std::move(graph)).first->second;
}

std::size_t PathwayGraphStore::memoized_graphs() const {
    std::lock_guard lock(mutex_);
    return graphs_.size();
}

} // namespace gig
