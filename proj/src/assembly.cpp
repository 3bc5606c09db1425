#include "gig/assembly.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "gig/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gig {

using nlohmann::json;

GeneVocabulary::GeneVocabulary(const std::vector<GeneSymbol>& genes) : symbols_(genes) {
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

std::int64_t GeneVocabulary::index_of(const GeneSymbol& g) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), g);
    if (it == symbols_.end() || *it != g) return unknown;
    return static_cast<std::int64_t>(it - symbols_.begin()) + 1;
}

PatientGraphResult build_patient_graph(const std::string& sample_id, const GeneSet& dysregulated,
                                       PathwayGraphStore& store, const MeasuredGenes& measured,
                                       std::vector<GeneSymbol>* unmatched) {
    auto wpids = pathway_set_for_sample(dysregulated, store.index(), unmatched);
    if (wpids.empty()) return Exclusion{sample_id, "no-pathways"};
    std::vector<MolecularGraph> parts;
    parts.reserve(wpids.size());
    for (const auto& wpid : wpids) parts.push_back(*store.pathway_graph(wpid, measured));
    auto merged = restrict_to_genes(merge_graphs(parts), measured.genes);
    if (merged.node_count() < 2) return Exclusion{sample_id, "too-small"};
    if (merged.edge_count() == 0) return Exclusion{sample_id, "no-edges"};
    return merged;
}

PatientGraphRecord assemble_record(const std::string& sample_id, const MolecularGraph& graph,
                                   const FeatureLookup& z, const FeatureLookup& c,
                                   const GeneVocabulary& vocab, int label) {
    PatientGraphRecord rec;
    rec.sample_id = sample_id;
    rec.graph = graph;
    rec.label = label;
    rec.node_features = DenseMatrix(graph.node_count(), 2);
    rec.gene_indices.reserve(graph.node_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& g = graph.nodes()[i];
        auto zi = z.find(g);
        auto ci = c.find(g);
        if (zi == z.end() || ci == c.end())
            throw std::logic_error("no feature for graph node " + g.str() + " in sample " + sample_id);
        rec.node_features(i, 0) = zi->second;
        rec.node_features(i, 1) = ci->second;
        rec.gene_indices.push_back(vocab.index_of(g));
    }
    return rec;
}

LabelEncoding encode_labels(const std::map<std::string, std::string>& sample_classes) {
    LabelEncoding enc;
    std::set<std::string> names;
    for (const auto& [sample, cls] : sample_classes) names.insert(cls);
    enc.classes.assign(names.begin(), names.end());
    for (const auto& [sample, cls] : sample_classes) {
        auto pos = std::lower_bound(enc.classes.begin(), enc.classes.end(), cls) - enc.classes.begin();
        enc.codes[sample] = static_cast<int>(pos);
    }
    return enc;
}

std::map<std::string, std::string> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open labels file");
    std::map<std::string, std::string> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto fields = split(line, '\t');
        if (lineno == 1 && to_lower(trim(fields[0])) == "sample_id") continue;
        if (fields.size() != 2)
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": expected 2 columns");
        auto sample = std::string(trim(fields[0]));
        auto cls = std::string(trim(fields[1]));
        if (sample.empty() || cls.empty())
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": empty field");
        if (!labels.emplace(sample, cls).second) throw DataError("duplicate label for sample " + sample);
    }
    return labels;
}

SplitSpec stratified_split(const std::map<std::string, int>& labels, double frac, std::uint64_t seed) {
    if (labels.empty()) throw DataError("cannot split an empty label set");
    if (!(frac > 0.0 && frac < 1.0)) throw UsageError("split fraction must be in (0, 1)");
    std::map<int, std::vector<std::string>> by_class;
    for (const auto& [sample, cls] : labels) by_class[cls].push_back(sample);

    SplitSpec split;
    split.seed = seed;
    for (auto& [cls, samples] : by_class) {
        // samples arrive sorted (map order), so the shuffle input is deterministic
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(samples);
        const auto n = samples.size();
        std::size_t n_train = n;
        if (n >= 2) {
            auto target = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
            n_train = std::clamp<std::size_t>(target, 1, n - 1);
        }
        split.train_ids.insert(split.train_ids.end(), samples.begin(),
                               samples.begin() + static_cast<std::ptrdiff_t>(n_train));
        split.test_ids.insert(split.test_ids.end(), samples.begin() + static_cast<std::ptrdiff_t>(n_train),
                              samples.end());
    }
    std::sort(split.train_ids.begin(), split.train_ids.end());
    std::sort(split.test_ids.begin(), split.test_ids.end());
    return split;
}

ClassWeights class_weights(const std::vector<int>& train_labels, int num_classes) {
    if (num_classes < 1) throw UsageError("number of classes must be positive");
    ClassWeights out;
    out.class_counts.assign(static_cast<std::size_t>(num_classes), 0);
    for (int y : train_labels) {
        if (y < 0 || y >= num_classes) throw DataError("class code " + std::to_string(y) + " out of range");
        ++out.class_counts[static_cast<std::size_t>(y)];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (out.class_counts[static_cast<std::size_t>(c)] == 0)
            throw DataError("class " + std::to_string(c) + " has no training samples");
    }

    // With L = lcm(n_j): w_c = C * (L/n_c) / sum_j (L/n_j), an exact integer
    // ratio rounded once. Falls back to floating point if L overflows.
    const double classes = static_cast<double>(num_classes);
    unsigned long long lcm = 1;
    bool exact = true;
    for (auto n : out.class_counts) {
        auto g = std::gcd(lcm, static_cast<unsigned long long>(n));
        auto step = static_cast<unsigned long long>(n) / g;
        if (lcm > (1ULL << 52) / step) {
            exact = false;
            break;
        }
        lcm *= step;
    }
    out.weights.resize(out.class_counts.size());
    if (exact) {
        unsigned long long denom = 0;
        for (auto n : out.class_counts) denom += lcm / n;
        for (std::size_t c = 0; c < out.class_counts.size(); ++c) {
            auto numer = static_cast<double>(lcm / out.class_counts[c]) * classes;
            out.weights[c] = numer / static_cast<double>(denom);
        }
    } else {
        double harmonic = 0.0;
        for (auto n : out.class_counts) harmonic += 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < out.class_counts.size(); ++c)
            out.weights[c] = (1.0 / static_cast<double>(out.class_counts[c])) / harmonic * classes;
    }
    return out;
}

namespace {

void check_sample_file_name(const std::string& id) {
    bool bad = id.empty() || id.front() == '.' || id.find_first_of("/\\\t\n\r") != std::string::npos;
    if (bad) throw DataError("sample id '" + id + "' cannot be used as a file name");
}

std::string nodes_tsv(const PatientGraphRecord& rec) {
    std::ostringstream out;
    for (std::size_t i = 0; i < rec.graph.node_count(); ++i) {
        out << rec.graph.nodes()[i].str() << '\t' << rec.gene_indices[i] << '\t'
            << format_double(rec.node_features(i, 0)) << '\t' << format_double(rec.node_features(i, 1)) << '\n';
    }
    return out.str();
}

std::string edges_tsv(const PatientGraphRecord& rec) {
    std::ostringstream out;
    for (const auto& e : rec.graph.edges()) {
        auto a = rec.graph.index_of(e.a);
        auto b = rec.graph.index_of(e.b);
        out << a << '\t' << b << '\n' << b << '\t' << a << '\n';
    }
    return out.str();
}

} // namespace

DatasetManifest export_dataset(const std::vector<PatientGraphRecord>& records, const SplitSpec& split,
                               const ClassWeights& weights, const GeneVocabulary& vocab,
                               const std::filesystem::path& out_dir, const ExportMetadata& meta) {
    if (records.empty()) throw DataError("nothing to export: no patient graph records");
    std::set<std::string> ids;
    for (const auto& rec : records) {
        check_sample_file_name(rec.sample_id);
        if (!ids.insert(rec.sample_id).second) throw DataError("duplicate record for sample " + rec.sample_id);
        if (rec.node_features.rows() != rec.graph.node_count() || rec.gene_indices.size() != rec.graph.node_count())
            throw std::logic_error("record " + rec.sample_id + " has misaligned features");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "samples", ec);
    if (ec) throw IoError((out_dir / "samples").string(), "cannot create output directory");

    // Per-sample files are independent; write them in parallel and hash as we go.
    std::vector<std::array<std::pair<std::string, std::string>, 3>> hashed(records.size());
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const auto& rec = records[static_cast<std::size_t>(i)];
            std::array<std::pair<std::string, std::string>, 3> files{
                std::pair{"samples/" + rec.sample_id + ".nodes.tsv", nodes_tsv(rec)},
                std::pair{"samples/" + rec.sample_id + ".edges.tsv", edges_tsv(rec)},
                std::pair{"samples/" + rec.sample_id + ".label", std::to_string(rec.label) + "\n"}};
            for (auto& [rel, bytes] : files) {
                write_file_atomic(out_dir / rel, bytes);
                bytes = sha256_hex(bytes);
            }
            hashed[static_cast<std::size_t>(i)] = std::move(files);
        } catch (...) {
#pragma omp critical(gig_export_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    DatasetManifest manifest;
    for (const auto& files : hashed)
        for (const auto& [rel, digest] : files) manifest.files[rel] = digest;

    auto emit = [&](const std::string& rel, const std::string& bytes) {
        write_file_atomic(out_dir / rel, bytes);
        manifest.files[rel] = sha256_hex(bytes);
    };

    std::ostringstream vocab_out;
    vocab_out << "<unk>\t0\n";
    for (std::size_t i = 0; i < vocab.symbols().size(); ++i) vocab_out << vocab.symbols()[i].str() << '\t' << i + 1 << '\n';
    emit("vocab.tsv", vocab_out.str());

    json split_doc;
    split_doc["seed"] = split.seed;
    split_doc["train"] = split.train_ids;
    split_doc["test"] = split.test_ids;
    emit("split.json", split_doc.dump(2) + "\n");

    std::ostringstream weights_out;
    for (std::size_t c = 0; c < weights.weights.size(); ++c) {
        weights_out << c << '\t' << (c < meta.classes.size() ? meta.classes[c] : std::to_string(c)) << '\t'
                    << weights.class_counts[c] << '\t' << format_double(weights.weights[c]) << '\n';
    }
    emit("class_weights.tsv", weights_out.str());

    std::ostringstream excl_out;
    for (const auto& e : meta.exclusions) excl_out << e.sample_id << '\t' << e.reason << '\n';
    emit("exclusions.tsv", excl_out.str());

    json doc;
    doc["format"] = "gig-dataset/1";
    doc["classes"] = meta.classes;
    doc["num_records"] = records.size();
    doc["num_excluded"] = meta.exclusions.size();
    doc["vocab_size"] = vocab.size();
    doc["parameters"] = meta.parameters;
    json samples = json::array();
    for (const auto& rec : records) {
        samples.push_back({{"id", rec.sample_id},
                           {"label", rec.label},
                           {"nodes", rec.graph.node_count()},
                           {"edges", rec.graph.edge_count()}});
    }
    doc["samples"] = samples;
    doc["files"] = manifest.files;
    manifest.document = doc;
    write_file_atomic(out_dir / "manifest.json", doc.dump(2) + "\n");
    return manifest;
}

} // namespace gig
