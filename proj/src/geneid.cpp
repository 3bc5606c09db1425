#include "gig/geneid.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>

namespace gig {

namespace {

using nlohmann::json;

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_ensembl_gene(std::string_view s) {
    return s.size() > 4 && s.substr(0, 4) == "ENSG" && all_digits(s.substr(4));
}

// Scope name the annotation service uses for each identifier namespace.
std::optional<std::string> service_scope(std::string_view ns) {
    if (ns == "ensembl") return "ensembl.gene";
    if (ns == "entrez") return "entrezgene";
    if (ns == "uniprot") return "uniprot";
    if (ns == "label") return "symbol";
    return std::nullopt;
}

std::pair<std::string, std::string> split_qualified(const std::string& key) {
    auto colon = key.find(':');
    return {key.substr(0, colon), key.substr(colon + 1)};
}

struct CacheContents {
    GeneIdMapping mapping;
    std::set<std::string> known;  // every id the service has answered for, found or not
};

void absorb_response(const std::string& ns, const json& response, CacheContents& out) {
    for (const auto& hit : response) {
        if (!hit.is_object() || !hit.contains("query")) continue;
        std::string key = qualify_identifier(ns + ":" + hit["query"].get<std::string>());
        out.known.insert(key);
        if (hit.value("notfound", false) || !hit.contains("symbol")) continue;
        if (out.mapping.find(key) != nullptr) continue;  // first hit wins
        auto symbol = normalize_symbol(hit["symbol"].get<std::string>());
        if (symbol.empty()) continue;
        bool coding = hit.value("type_of_gene", std::string{}) == "protein-coding";
        out.mapping.insert(key, GeneSymbol(symbol), coding);
    }
}

CacheContents read_cache(const std::filesystem::path& dir) {
    CacheContents out;
    if (!std::filesystem::is_directory(dir)) return out;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("batch-") && name.ends_with(".json"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        json doc;
        try {
            doc = json::parse(read_file(path));
            auto ns = doc.at("namespace").get<std::string>();
            const auto& response = doc.at("response");
            if (!response.is_array()) throw CacheCorruptionError(path.string(), "response is not an array");
            absorb_response(ns, response, out);
        } catch (const json::exception& e) {
            throw CacheCorruptionError(path.string(), e.what());
        } catch (const DataError& e) {
            throw CacheCorruptionError(path.string(), e.what());
        }
    }
    return out;
}

std::mutex cache_write_mutex;

void write_cache_batch(const std::filesystem::path& dir, const std::string& ns,
                       const std::vector<std::string>& ids, const json& response) {
    json doc;
    doc["namespace"] = ns;
    doc["ids"] = ids;
    doc["response"] = response;
    std::string key = ns;
    for (const auto& id : ids) key += "\n" + id;
    auto path = dir / ("batch-" + sha256_hex(key).substr(0, 16) + ".json");
    std::lock_guard lock(cache_write_mutex);
    try {
        std::filesystem::create_directories(dir);
        write_file_atomic(path, doc.dump(1) + "\n");
    } catch (const std::exception&) {
        throw CacheWriteError("annotation batch", path.string());
    }
}

json query_service(const AnnotationClientOptions& options, const std::string& scope,
                   const std::vector<std::string>& bare_ids, const std::vector<std::string>& qualified) {
    auto url = split_url(options.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(options.timeout_seconds);
    client.set_read_timeout(options.timeout_seconds);
    std::string q;
    for (const auto& id : bare_ids) {
        if (!q.empty()) q += ",";
        q += id;
    }
    httplib::Params params{{"q", q},
                           {"scopes", scope},
                           {"fields", "symbol,type_of_gene"},
                           {"species", "human"}};
    std::string path = url.path;
    if (path.empty() || path.back() != '/') path += "/";
    path += "query";
    auto res = client.Post(path, params);
    if (!res) throw NetworkError(qualified, httplib::to_string(res.error()));
    if (res->status != 200) throw NetworkError(qualified, "HTTP " + std::to_string(res->status));
    try {
        auto body = json::parse(res->body);
        if (!body.is_array()) throw NetworkError(qualified, "unexpected response shape");
        return body;
    } catch (const json::exception& e) {
        throw NetworkError(qualified, std::string("malformed response: ") + e.what());
    }
}

} // namespace

std::string strip_ensembl_version(std::string_view id) {
    auto dot = id.rfind('.');
    if (dot == std::string_view::npos) return std::string(id);
    if (is_ensembl_gene(id.substr(0, dot)) && all_digits(id.substr(dot + 1)))
        return std::string(id.substr(0, dot));
    return std::string(id);
}

std::string qualify_identifier(std::string_view raw) {
    auto id = trim(raw);
    auto colon = id.find(':');
    if (colon != std::string_view::npos) {
        auto ns = to_lower(trim(id.substr(0, colon)));
        auto rest = std::string(trim(id.substr(colon + 1)));
        if (ns == "label") return "label:" + normalize_symbol(rest);
        if (ns == "ensembl") return "ensembl:" + strip_ensembl_version(rest);
        return ns + ":" + rest;
    }
    auto stripped = strip_ensembl_version(id);
    if (is_ensembl_gene(stripped)) return "ensembl:" + stripped;
    return "label:" + normalize_symbol(id);
}

void GeneIdMapping::insert(std::string_view source_id, const GeneSymbol& symbol, bool protein_coding) {
    auto key = qualify_identifier(source_id);
    auto [it, inserted] = entries_.try_emplace(key, MappingEntry{symbol, protein_coding});
    if (!inserted && (it->second.symbol != symbol || it->second.protein_coding != protein_coding))
        throw DataError("conflicting mapping entries for " + key);
}

const MappingEntry* GeneIdMapping::find(std::string_view source_id) const {
    auto it = entries_.find(qualify_identifier(source_id));
    return it == entries_.end() ? nullptr : &it->second;
}

bool operator==(const GeneIdMapping& x, const GeneIdMapping& y) {
    if (x.entries_.size() != y.entries_.size()) return false;
    return std::equal(x.entries_.begin(), x.entries_.end(), y.entries_.begin(),
                      [](const auto& a, const auto& b) {
                          return a.first == b.first && a.second.symbol == b.second.symbol &&
                                 a.second.protein_coding == b.second.protein_coding;
                      });
}

GeneIdMapping read_mapping_table(std::istream& in) {
    GeneIdMapping table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto fields = split(line, '\t');
        if (lineno == 1 && to_lower(trim(fields[0])) == "source_id") continue;
        if (fields.size() != 3)
            throw DataError("mapping table line " + std::to_string(lineno) + ": expected 3 columns");
        auto flag = trim(fields[2]);
        if (flag != "0" && flag != "1")
            throw DataError("mapping table line " + std::to_string(lineno) +
                            ": protein_coding must be 0 or 1");
        auto symbol = normalize_symbol(fields[1]);
        if (symbol.empty())
            throw DataError("mapping table line " + std::to_string(lineno) + ": empty symbol");
        table.insert(fields[0], GeneSymbol(symbol), flag == "1");
    }
    return table;
}

GeneIdMapping load_mapping_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open mapping table");
    return read_mapping_table(in);
}

std::optional<GeneSymbol> canonicalize(std::string_view id, const GeneIdMapping& table,
                                       bool require_protein_coding) {
    const auto* entry = table.find(id);
    if (entry == nullptr) return std::nullopt;
    if (require_protein_coding && !entry->protein_coding) return std::nullopt;
    return entry->symbol;
}

std::filesystem::path default_annotation_cache_dir() {
    if (auto dir = env_var("GIG_CACHE_DIR")) return *dir;
    if (auto home = env_var("HOME")) return std::filesystem::path(*home) / ".cache/gig/annotations";
    return ".gig-cache/annotations";
}

GeneIdMapping resolve_batch_online(const std::vector<std::string>& ids,
                                   const std::filesystem::path& cache_dir,
                                   const AnnotationClientOptions& options) {
    std::set<std::string> wanted;
    for (const auto& id : ids) wanted.insert(qualify_identifier(id));
    if (wanted.empty()) return {};

    auto cache = read_cache(cache_dir);

    std::map<std::string, std::vector<std::string>> missing_by_ns;
    for (const auto& key : wanted) {
        if (cache.known.contains(key)) continue;
        auto [ns, bare] = split_qualified(key);
        if (!service_scope(ns)) continue;  // the service has no scope for this namespace
        missing_by_ns[ns].push_back(key);
    }

    for (const auto& [ns, keys] : missing_by_ns) {
        for (std::size_t start = 0; start < keys.size(); start += options.batch_size) {
            auto end = std::min(keys.size(), start + options.batch_size);
            std::vector<std::string> qualified(keys.begin() + static_cast<std::ptrdiff_t>(start),
                                               keys.begin() + static_cast<std::ptrdiff_t>(end));
            std::vector<std::string> bare;
            for (const auto& k : qualified) bare.push_back(split_qualified(k).second);
            auto response = query_service(options, *service_scope(ns), bare, qualified);
            write_cache_batch(cache_dir, ns, qualified, response);
            absorb_response(ns, response, cache);
        }
    }

    GeneIdMapping result;
    for (const auto& key : wanted) {
        if (const auto* entry = cache.mapping.find(key))
            result.insert(key, entry->symbol, entry->protein_coding);
    }
    return result;
}

GeneIdMapping load_annotation_cache(const std::filesystem::path& cache_dir) {
    return read_cache(cache_dir).mapping;
}

} // namespace gig
