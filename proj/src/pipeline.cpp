#include "gig/pipeline.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "gig/metrics.hpp"
#include "gig/parallel.hpp"
#include "gig/pathway_store.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace gig {

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
    auto s = to_lower(v);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw UsageError("config key " + key + " expects true or false, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return parse_double(v);
        } else {
            std::size_t used = 0;
            auto n = std::stoull(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return static_cast<T>(n);
        }
    } catch (const std::exception&) {
        throw UsageError("config key " + key + " expects a number, got '" + v + "'");
    }
}

Orientation parse_orientation(const std::string& v) {
    auto s = to_lower(v);
    if (s == "genes_in_rows" || s == "genes-in-rows" || s == "rows") return Orientation::genes_in_rows;
    if (s == "genes_in_cols" || s == "genes-in-cols" || s == "cols") return Orientation::genes_in_cols;
    throw UsageError("orientation must be genes_in_rows or genes_in_cols, got '" + v + "'");
}

fs::path resolve(const fs::path& base, const std::string& v) {
    fs::path p(v);
    return p.is_absolute() || v.empty() ? p : base / p;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text_or_throw(const fs::path& path, const char* what) {
    if (!fs::exists(path)) throw DataError(std::string(what) + " not found: " + path.string());
    return read_file(path);
}

// Runs body(i) for i in [0, n) in parallel; the first failure in index order is rethrown.
template <typename F>
void parallel_for_each_index(std::size_t n, F&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<Exclusion> read_exclusions(const fs::path& path) {
    std::vector<Exclusion> out;
    if (!fs::exists(path)) return out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cols = split(line, '\t');
        if (cols.size() != 2) throw DataError("bad exclusions line: " + line);
        out.push_back({cols[0], cols[1]});
    }
    return out;
}

} // namespace

PipelineConfig load_config(const fs::path& path) {
    if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path.string());
    } catch (const CLI::Error& e) {
        throw UsageError("cannot read config " + path.string() + ": " + e.what());
    }
    const fs::path base = fs::absolute(path).parent_path();
    PipelineConfig cfg;
    for (const auto& item : items) {
        // CLI11 emits "++" / "--" markers around sections
        if (item.name == "++" || item.name == "--") continue;
        const auto& key = item.name;
        const std::string v = item.inputs.empty() ? std::string{} : item.inputs.front();
        if (key == "matrix") cfg.matrix = resolve(base, v);
        else if (key == "orientation") cfg.orientation = parse_orientation(v);
        else if (key == "mapping") cfg.mapping = resolve(base, v);
        else if (key == "pathway_index") cfg.pathway_index = resolve(base, v);
        else if (key == "labels") cfg.labels = resolve(base, v);
        else if (key == "cache_dir") cfg.cache_dir = resolve(base, v);
        else if (key == "output_dir") cfg.output_dir = resolve(base, v);
        else if (key == "hvg_n") cfg.hvg_n = parse_number<std::size_t>(key, v);
        else if (key == "log1p") cfg.log1p = parse_bool(key, v);
        else if (key == "protein_coding_only") cfg.protein_coding_only = parse_bool(key, v);
        else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, v);
        else if (key == "tau") cfg.tau = parse_number<double>(key, v);
        else if (key == "k") cfg.k = parse_number<std::size_t>(key, v);
        else if (key == "split_fraction") cfg.split_fraction = parse_number<double>(key, v);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
        else if (key == "offline") cfg.offline = parse_bool(key, v);
        else throw UsageError("unknown config key '" + item.fullname() + "' in " + path.string());
    }
    return cfg;
}

void validate_config(const PipelineConfig& cfg, bool need_inputs) {
    if (cfg.hvg_n < 1) throw UsageError("hvg_n must be at least 1");
    if (cfg.k < 1) throw UsageError("k must be at least 1");
    if (!(cfg.tau >= 0.0 && cfg.tau <= 100.0)) throw UsageError("tau must lie in [0, 100]");
    if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0)) throw UsageError("split_fraction must lie in (0, 1)");
    if (!(cfg.epsilon > 0.0)) throw UsageError("epsilon must be positive");
    if (cfg.output_dir.empty()) throw UsageError("output_dir is empty");
    if (!need_inputs) return;
    for (auto [name, p] : {std::pair{"matrix", &cfg.matrix}, std::pair{"mapping", &cfg.mapping},
                           std::pair{"pathway_index", &cfg.pathway_index}}) {
        if (p->empty()) throw UsageError(std::string(name) + " is not set");
        if (!fs::exists(*p)) throw DataError(std::string(name) + " not found: " + p->string());
    }
}

nlohmann::json config_json(const PipelineConfig& cfg) {
    return nlohmann::json{{"matrix", cfg.matrix.generic_string()},
                          {"orientation", cfg.orientation == Orientation::genes_in_rows ? "genes_in_rows" : "genes_in_cols"},
                          {"mapping", cfg.mapping.generic_string()},
                          {"pathway_index", cfg.pathway_index.generic_string()},
                          {"labels", cfg.labels.generic_string()},
                          {"cache_dir", cfg.cache_dir.generic_string()},
                          {"hvg_n", cfg.hvg_n},
                          {"log1p", cfg.log1p},
                          {"protein_coding_only", cfg.protein_coding_only},
                          {"epsilon", cfg.epsilon},
                          {"tau", cfg.tau},
                          {"k", cfg.k},
                          {"split_fraction", cfg.split_fraction},
                          {"seed", cfg.seed},
                          {"output_dir", cfg.output_dir.generic_string()},
                          {"offline", cfg.offline}};
}

fs::path processed_matrix_path(const PipelineConfig& cfg) { return cfg.output_dir / "processed" / "matrix.tsv"; }
fs::path graphs_dir(const PipelineConfig& cfg) { return cfg.output_dir / "graphs"; }
fs::path dataset_dir(const PipelineConfig& cfg) { return cfg.output_dir / "dataset"; }

PreprocessSummary run_preprocess(const PipelineConfig& cfg) {
    validate_config(cfg, true);
    auto raw = load_raw_matrix(cfg.matrix, cfg.orientation);
    auto table = load_mapping_table(cfg.mapping);
    PreprocessSummary summary;
    summary.raw_rows = raw.row_ids.size();
    auto m = canonicalize_rows(raw, table, cfg.protein_coding_only, &summary.report);
    if (cfg.log1p) m = log1p_transform(m);
    m = select_hvg(m, cfg.hvg_n);
    summary.retained_genes = m.gene_count();
    summary.samples = m.sample_count();

    fs::create_directories(processed_matrix_path(cfg).parent_path());
    save_expression_matrix(processed_matrix_path(cfg), m);
    std::ostringstream rep;
    for (const auto& id : summary.report.unmapped) rep << id << "\tunmapped\n";
    for (const auto& id : summary.report.duplicates) rep << id << "\tduplicate\n";
    write_file_atomic(cfg.output_dir / "processed" / "dropped_ids.tsv", rep.str());
    return summary;
}

GraphBuildSummary run_build_graphs(const PipelineConfig& cfg) {
    validate_config(cfg, true);
    const auto processed = processed_matrix_path(cfg);
    if (!fs::exists(processed)) throw DataError("processed matrix missing, run preprocess first: " + processed.string());
    const auto m = load_expression_matrix(processed);
    const auto z = samplewise_zscores(m, cfg.epsilon);

    const fs::path cache = cfg.cache_dir.empty() ? default_pathway_cache_dir() : cfg.cache_dir;
    PathwayGraphStore store(load_pathway_index(cfg.pathway_index), load_mapping_table(cfg.mapping), cache, !cfg.offline);
    const MeasuredGenes measured(m.gene_set());

    std::vector<PatientGraphResult> results(m.sample_count(), Exclusion{});
    parallel_for_each_index(m.sample_count(), [&](std::size_t j) {
        const auto& id = m.samples()[j];
        auto col = z.column(j);
        auto d = dysregulated_genes(col, m.genes(), cfg.tau);
        results[j] = build_patient_graph(id, d, store, measured);
    });

    const auto dir = graphs_dir(cfg);
    fs::remove_all(dir);
    fs::create_directories(dir);
    GraphBuildSummary summary;
    std::map<std::string, MolecularGraph> built;
    for (std::size_t j = 0; j < results.size(); ++j) {
        if (auto* g = std::get_if<MolecularGraph>(&results[j])) built.emplace(m.samples()[j], std::move(*g));
        else summary.exclusions.push_back(std::get<Exclusion>(results[j]));
    }
    save_graph_dir(dir, built);
    std::ostringstream ex;
    for (const auto& e : summary.exclusions) ex << e.sample_id << '\t' << e.reason << '\n';
    write_file_atomic(dir / "exclusions.tsv", ex.str());
    summary.built = built.size();
    return summary;
}

DatasetManifest run_export(const PipelineConfig& cfg) {
    validate_config(cfg, false);
    if (cfg.labels.empty()) throw UsageError("labels is not set");
    if (!fs::exists(cfg.labels)) throw DataError("labels not found: " + cfg.labels.string());
    const auto processed = processed_matrix_path(cfg);
    if (!fs::exists(processed)) throw DataError("processed matrix missing, run preprocess first: " + processed.string());
    const auto m = load_expression_matrix(processed);
    const auto z = samplewise_zscores(m, cfg.epsilon);
    const auto c = pcc_topk_feature(genewise_zscores(m, cfg.epsilon), cfg.k);
    const auto graphs = load_graph_dir(graphs_dir(cfg));
    if (graphs.empty()) throw DataError("no patient graphs to export, run build-graphs first");
    const auto all_labels = load_labels(cfg.labels);

    std::map<std::string, std::string> labels;
    for (const auto& [id, g] : graphs) {
        auto it = all_labels.find(id);
        if (it == all_labels.end()) throw DataError("sample " + id + " has a graph but no label");
        labels.emplace(id, it->second);
    }
    const auto enc = encode_labels(labels);
    const auto split = stratified_split(enc.codes, cfg.split_fraction, cfg.seed);
    std::vector<int> train;
    for (const auto& id : split.train_ids) train.push_back(enc.codes.at(id));
    const auto weights = class_weights(train, static_cast<int>(enc.classes.size()));
    const GeneVocabulary vocab(m.genes());

    FeatureLookup c_lookup;
    for (std::size_t g = 0; g < m.gene_count(); ++g) c_lookup.emplace(m.genes()[g], c[g]);
    std::map<std::string, std::size_t> column_of;
    for (std::size_t j = 0; j < m.sample_count(); ++j) column_of.emplace(m.samples()[j], j);

    std::vector<const std::pair<const std::string, MolecularGraph>*> order;
    for (const auto& entry : graphs) order.push_back(&entry);
    std::vector<PatientGraphRecord> records(order.size());
    parallel_for_each_index(order.size(), [&](std::size_t i) {
        const auto& [id, g] = *order[i];
        auto col = column_of.find(id);
        if (col == column_of.end()) throw DataError("sample " + id + " is not in the processed matrix");
        FeatureLookup z_lookup;
        for (std::size_t r = 0; r < m.gene_count(); ++r)
            if (g.contains(m.genes()[r])) z_lookup.emplace(m.genes()[r], z(r, col->second));
        records[i] = assemble_record(id, g, z_lookup, c_lookup, vocab, enc.codes.at(id));
    });

    ExportMetadata meta;
    meta.classes = enc.classes;
    meta.exclusions = read_exclusions(graphs_dir(cfg) / "exclusions.tsv");
    auto params = config_json(cfg);
    for (const char* path_key : {"matrix", "mapping", "pathway_index", "labels", "cache_dir", "output_dir"})
        params.erase(path_key);
    meta.parameters = params;
    return export_dataset(records, split, weights, vocab, dataset_dir(cfg), meta);
}

std::map<std::string, MolecularGraph> load_graph_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("graph directory not found: " + dir.string());
    std::map<std::string, MolecularGraph> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto& p = entry.path();
        if (!entry.is_regular_file() || p.extension() != ".tsv" || p.filename() == "exclusions.tsv") continue;
        out.emplace(p.stem().string(), load_edge_list(p));
    }
    return out;
}

void save_graph_dir(const fs::path& dir, const std::map<std::string, MolecularGraph>& graphs) {
    fs::create_directories(dir);
    for (const auto& [id, g] : graphs) {
        if (id.empty() || id.front() == '.' || id.find_first_of("/\\") != std::string::npos)
            throw DataError("graph id '" + id + "' cannot be used as a file name");
        save_edge_list(dir / (id + ".tsv"), g);
    }
}

NullKind parse_null_kind(const std::string& s) {
    if (s == "er") return NullKind::erdos_renyi;
    if (s == "dp") return NullKind::degree_preserving;
    if (s == "full") return NullKind::fully_connected;
    throw UsageError("null model kind must be er, dp or full, got '" + s + "'");
}

std::map<std::string, MolecularGraph> make_controls(const std::map<std::string, MolecularGraph>& graphs, NullKind kind,
                                                    std::uint64_t seed, std::uint64_t factor) {
    if (factor < 1) throw UsageError("swap attempt factor must be at least 1");
    std::vector<const std::pair<const std::string, MolecularGraph>*> order;
    for (const auto& entry : graphs) order.push_back(&entry);
    std::vector<MolecularGraph> out(order.size());
    parallel_for_each_index(order.size(), [&](std::size_t i) {
        const auto& [id, g] = *order[i];
        RewireConfig cfg{control_seed(seed, id), factor};
        switch (kind) {
        case NullKind::erdos_renyi: out[i] = er_rewire(g, cfg); break;
        case NullKind::degree_preserving: out[i] = degree_preserving_rewire(g, cfg); break;
        case NullKind::fully_connected: out[i] = fully_connected(GeneSet(g.nodes().begin(), g.nodes().end())); break;
        }
    });
    std::map<std::string, MolecularGraph> result;
    for (std::size_t i = 0; i < order.size(); ++i) result.emplace(order[i]->first, std::move(out[i]));
    return result;
}

std::vector<OrbitSignature> orbit_signatures(const std::map<std::string, MolecularGraph>& graphs) {
    std::vector<OrbitSignature> sigs;
    for (const auto& [id, g] : graphs) sigs.push_back(graph_signature(id, count_orbits(g)));
    return sigs;
}

void write_orbit_table(std::ostream& out, const std::vector<OrbitSignature>& sigs) {
    out << "graph_id";
    for (std::size_t k = 0; k < orbit_count; ++k) out << "\to" << k;
    out << '\n';
    for (const auto& s : sigs) {
        out << s.graph_id;
        for (double v : s.means) out << '\t' << format_double(v);
        out << '\n';
    }
}

std::vector<OrbitSignature> read_orbit_table(std::istream& in) {
    std::vector<OrbitSignature> sigs;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            if (line.starts_with("graph_id")) continue;
        }
        auto cols = split(line, '\t');
        if (cols.size() != orbit_count + 1) throw DataError("orbit table row needs 16 columns: " + line);
        OrbitSignature s;
        s.graph_id = cols[0];
        for (std::size_t k = 0; k < orbit_count; ++k) {
            try {
                s.means[k] = parse_double(cols[k + 1]);
            } catch (const std::exception&) {
                throw DataError("bad orbit value '" + cols[k + 1] + "' for " + cols[0]);
            }
        }
        sigs.push_back(s);
    }
    return sigs;
}

void write_comparison(std::ostream& out, const std::vector<OrbitComparison>& rows) {
    out << "orbit\tgroup_a\tn_a\tmean_a\tmedian_a\tgroup_b\tn_b\tmean_b\tmedian_b\tu\tz\tp_value\n";
    for (const auto& r : rows) {
        out << 'o' << r.orbit << '\t' << r.a.group << '\t' << r.a.n << '\t' << format_double(r.a.mean) << '\t'
            << format_double(r.a.median) << '\t' << r.b.group << '\t' << r.b.n << '\t' << format_double(r.b.mean) << '\t'
            << format_double(r.b.median) << '\t' << format_double(r.test.u) << '\t' << format_double(r.test.z) << '\t'
            << format_double(r.test.p_value) << '\n';
    }
}

void write_group_zscores(std::ostream& out, const GroupZScores& z) {
    out << "group";
    for (std::size_t k = 0; k < orbit_count; ++k) out << "\to" << k;
    out << '\n';
    for (std::size_t g = 0; g < z.groups.size(); ++g) {
        out << z.groups[g];
        for (double v : z.z[g]) out << '\t' << format_double(v);
        out << '\n';
    }
}

namespace {

// Config-file keys, overridable from the command line.
struct Overrides {
    std::string config;
    std::optional<std::string> matrix, mapping, pathway_index, labels, cache_dir, output_dir, orientation;
    std::optional<std::size_t> hvg_n, k;
    std::optional<double> epsilon, tau, split_fraction;
    std::optional<std::uint64_t> seed;
    std::optional<bool> log1p, protein_coding_only, offline;
};

void add_pipeline_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "TOML config file (flags override its keys)");
    sub->add_option("--matrix", o.matrix, "expression matrix (TSV or CSV)");
    sub->add_option("--orientation", o.orientation, "genes_in_rows or genes_in_cols");
    sub->add_flag_callback("--genes-in-rows", [&o] { o.orientation = "genes_in_rows"; }, "matrix rows are genes");
    sub->add_flag_callback("--genes-in-cols", [&o] { o.orientation = "genes_in_cols"; }, "matrix columns are genes");
    sub->add_option("--mapping", o.mapping, "identifier mapping table");
    sub->add_option("--pathway-index", o.pathway_index, "gene to WPID index");
    sub->add_option("--labels", o.labels, "sample_id<TAB>class table");
    sub->add_option("--cache-dir", o.cache_dir, "GPML cache directory");
    sub->add_option("--output-dir,--out", o.output_dir, "output root");
    sub->add_option("--hvg-n", o.hvg_n, "number of highly variable genes kept");
    sub->add_option("--k", o.k, "top-k partners for the co-expression feature");
    sub->add_option("--epsilon", o.epsilon, "z-score guard");
    sub->add_option("--tau", o.tau, "dysregulation percentile in [0, 100]");
    sub->add_option("--split-fraction", o.split_fraction, "train fraction");
    sub->add_option("--seed", o.seed, "split seed");
    sub->add_flag_callback("--log1p", [&o] { o.log1p = true; }, "apply log(1+x)");
    sub->add_flag_callback("--no-log1p", [&o] { o.log1p = false; }, "skip log(1+x)");
    sub->add_flag_callback("--protein-coding-only", [&o] { o.protein_coding_only = true; }, "keep protein-coding genes only");
    sub->add_flag_callback("--all-gene-types", [&o] { o.protein_coding_only = false; }, "keep every mapped gene");
    sub->add_flag_callback("--offline", [&o] { o.offline = true; }, "never download pathways");
    sub->add_flag_callback("--online", [&o] { o.offline = false; }, "download missing pathways");
}

PipelineConfig resolve_config(const Overrides& o) {
    PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    const fs::path cwd = fs::current_path();
    auto path_of = [&](const std::optional<std::string>& v, fs::path& dst) {
        if (v) dst = resolve(cwd, *v);
    };
    path_of(o.matrix, cfg.matrix);
    path_of(o.mapping, cfg.mapping);
    path_of(o.pathway_index, cfg.pathway_index);
    path_of(o.labels, cfg.labels);
    path_of(o.cache_dir, cfg.cache_dir);
    path_of(o.output_dir, cfg.output_dir);
    if (o.orientation) cfg.orientation = parse_orientation(*o.orientation);
    if (o.hvg_n) cfg.hvg_n = *o.hvg_n;
    if (o.k) cfg.k = *o.k;
    if (o.epsilon) cfg.epsilon = *o.epsilon;
    if (o.tau) cfg.tau = *o.tau;
    if (o.split_fraction) cfg.split_fraction = *o.split_fraction;
    if (o.seed) cfg.seed = *o.seed;
    if (o.log1p) cfg.log1p = *o.log1p;
    if (o.protein_coding_only) cfg.protein_coding_only = *o.protein_coding_only;
    if (o.offline) cfg.offline = *o.offline;
    return cfg;
}

const char* category_name(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::data: return "data";
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::environment: return "environment";
    }
    return "data";
}

void append_run_log(const fs::path& dir, const nlohmann::json& record) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / "run_log.jsonl", std::ios::app);
    if (out) out << record.dump() << '\n';
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Pathway-structured patient graph pipeline", "gig"};
    app.require_subcommand(1);
    int threads = 0;
    std::string run_log;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
        sub->add_option("--run-log", run_log, "directory for run_log.jsonl");
    };

    Overrides o;
    auto* pre = app.add_subcommand("preprocess", "canonicalize ids, log1p, keep highly variable genes");
    auto* build = app.add_subcommand("build-graphs", "one merged pathway graph per sample");
    auto* exp = app.add_subcommand("export", "write the graph-level dataset");
    for (auto* sub : {pre, build, exp}) {
        add_pipeline_options(sub, o);
        add_common(sub);
    }

    std::string kind, in_dir, out_path;
    std::uint64_t null_seed = 0, factor = 10;
    auto* null = app.add_subcommand("nullmodel", "rewired or complete control graphs");
    null->add_option("--kind", kind, "er, dp or full")->required();
    null->add_option("--seed", null_seed, "run seed");
    null->add_option("--factor", factor, "swap attempts per edge (dp)");
    null->add_option("--in", in_dir, "directory of edge lists")->required();
    null->add_option("--out", out_path, "output directory")->required();
    add_common(null);

    std::string orbit_in, orbit_out;
    auto* orbits = app.add_subcommand("orbits", "mean graphlet orbit counts per graph");
    orbits->add_option("--in", orbit_in, "directory of edge lists")->required();
    orbits->add_option("--out", orbit_out, "orbit table (TSV)")->required();
    add_common(orbits);

    std::string cmp_orbits, cmp_labels, cmp_out, cmp_z;
    auto* cmp = app.add_subcommand("compare-orbits", "rank orbit differences between two groups");
    cmp->add_option("--orbits", cmp_orbits, "orbit table from `gig orbits`")->required();
    cmp->add_option("--labels", cmp_labels, "sample_id<TAB>group table")->required();
    cmp->add_option("--out", cmp_out, "comparison table (default: stdout)");
    cmp->add_option("--zscores", cmp_z, "also write per-group z-scored signatures here");
    add_common(cmp);

    std::string scores, metric_labels, metric_out;
    auto* met = app.add_subcommand("metrics", "score predictions against labels");
    met->add_option("--scores", scores, "scores.tsv")->required();
    met->add_option("--labels", metric_labels, "optional sample_id<TAB>class table replacing true_class");
    met->add_option("--out", metric_out, "directory for metrics.json, roc.tsv and pr.tsv");
    add_common(met);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[usage]: " << e.what() << '\n';
        std::cerr << app.help();
        return static_cast<int>(ErrorCategory::usage);
    }

    if (threads > 0) set_thread_count(threads);
    auto* sub = app.get_subcommands().front();
    const auto started = std::chrono::steady_clock::now();
    nlohmann::json record{{"time", utc_timestamp()}, {"subcommand", sub->get_name()}};
    std::vector<std::string> args(argv + 1, argv + argc);
    record["args"] = args;
    fs::path log_dir = run_log;
    int code = 0;

    try {
        if (sub == pre || sub == build || sub == exp) {
            auto cfg = resolve_config(o);
            record["config_sha256"] = sha256_hex(config_json(cfg).dump());
            if (log_dir.empty()) log_dir = cfg.output_dir;
            if (sub == pre) {
                auto s = run_preprocess(cfg);
                std::cout << "preprocess: " << s.raw_rows << " input rows, " << s.retained_genes << " genes kept, "
                          << s.samples << " samples\n";
            } else if (sub == build) {
                auto s = run_build_graphs(cfg);
                std::cout << "build-graphs: " << s.built << " graphs, " << s.exclusions.size() << " excluded\n";
            } else {
                auto manifest = run_export(cfg);
                std::cout << "export: " << manifest.files.size() << " files in " << dataset_dir(cfg).string()
                          << ", manifest sha256 " << sha256_file(dataset_dir(cfg) / "manifest.json") << '\n';
            }
        } else if (sub == null) {
            auto k = parse_null_kind(kind);
            record["config_sha256"] = sha256_hex(nlohmann::json(args).dump());
            if (log_dir.empty()) log_dir = out_path;
            auto controls = make_controls(load_graph_dir(in_dir), k, null_seed, factor);
            save_graph_dir(out_path, controls);
            std::cout << "nullmodel: " << controls.size() << " " << kind << " controls\n";
        } else if (sub == orbits) {
            record["config_sha256"] = sha256_hex(nlohmann::json(args).dump());
            if (log_dir.empty()) log_dir = fs::absolute(orbit_out).parent_path();
            auto sigs = orbit_signatures(load_graph_dir(orbit_in));
            std::ostringstream out;
            write_orbit_table(out, sigs);
            if (auto parent = fs::path(orbit_out).parent_path(); !parent.empty()) fs::create_directories(parent);
            write_file_atomic(orbit_out, out.str());
        } else if (sub == cmp) {
            record["config_sha256"] = sha256_hex(nlohmann::json(args).dump());
            if (log_dir.empty() && !cmp_out.empty()) log_dir = fs::absolute(cmp_out).parent_path();
            std::istringstream in(read_text_or_throw(cmp_orbits, "orbit table"));
            auto sigs = read_orbit_table(in);
            auto labels = load_labels(cmp_labels);
            std::ostringstream out;
            write_comparison(out, compare_groups(sigs, labels));
            if (cmp_out.empty()) std::cout << out.str();
            else write_file_atomic(cmp_out, out.str());
            if (!cmp_z.empty()) {
                std::ostringstream zs;
                write_group_zscores(zs, zscore_signatures(sigs, labels));
                write_file_atomic(cmp_z, zs.str());
            }
        } else if (sub == met) {
            record["config_sha256"] = sha256_hex(nlohmann::json(args).dump());
            if (log_dir.empty() && !metric_out.empty()) log_dir = metric_out;
            auto p = load_scores(scores);
            if (!metric_labels.empty()) apply_labels(p, load_labels(metric_labels));
            if (!metric_out.empty()) write_metrics(p, metric_out);
            std::cout << metrics_report(p).dump(2) << '\n';
        }
    } catch (const Error& e) {
        code = static_cast<int>(e.category());
        std::cerr << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
        record["error"] = e.what();
    } catch (const fs::filesystem_error& e) {
        code = static_cast<int>(ErrorCategory::environment);
        std::cerr << "error[environment]: " << e.what() << '\n';
        record["error"] = e.what();
    } catch (const std::exception& e) {
        code = static_cast<int>(ErrorCategory::data);
        std::cerr << "error[data]: " << e.what() << '\n';
        record["error"] = e.what();
    }

    record["exit_code"] = code;
    record["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    if (!log_dir.empty()) append_run_log(log_dir, record);
    return code;
}

} // namespace gig
