#include "gig/assembly.hpp"
#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace gig;
using nlohmann::json;

namespace {

const char* kPath1 = R"(<Pathway>
  <DataNode GraphId="a" TextLabel="A" Type="GeneProduct"/>
  <DataNode GraphId="b" TextLabel="B" Type="GeneProduct"/>
  <DataNode GraphId="c" TextLabel="C" Type="GeneProduct"/>
  <Interaction><Graphics><Point GraphRef="a"/><Point GraphRef="b"/></Graphics></Interaction>
  <Interaction><Graphics><Point GraphRef="b"/><Point GraphRef="c"/></Graphics></Interaction>
</Pathway>)";

const char* kPath2 = R"(<Pathway>
  <DataNode GraphId="a" TextLabel="A" Type="GeneProduct"/>
  <DataNode GraphId="b" TextLabel="B" Type="GeneProduct"/>
  <DataNode GraphId="c" TextLabel="C" Type="GeneProduct"/>
  <Interaction><Graphics><Point GraphRef="a"/><Point GraphRef="b"/><Point GraphRef="c"/></Graphics></Interaction>
</Pathway>)";

const char* kLonely = R"(<Pathway>
  <DataNode GraphId="e" TextLabel="E" Type="GeneProduct"/>
  <DataNode GraphId="f" TextLabel="F" Type="GeneProduct"/>
</Pathway>)";

struct Store {
    testing::TempDir cache;
    std::unique_ptr<PathwayGraphStore> store;
    Store() {
        write_file_atomic(cache / "WP1.gpml", kPath1);
        write_file_atomic(cache / "WP2.gpml", kPath2);
        write_file_atomic(cache / "WP3.gpml", kLonely);
        std::istringstream idx("A\tWP1\nB\tWP1\nB\tWP2\nC\tWP2\nE\tWP3\nF\tWP3\nZ\tWP3\nQ\t\n");
        std::istringstream map("label:A\tA\t1\nlabel:B\tB\t1\nlabel:C\tC\t1\nlabel:E\tE\t1\nlabel:F\tF\t1\n");
        store = std::make_unique<PathwayGraphStore>(read_pathway_index(idx), read_mapping_table(map), cache.path(),
                                                    false);
    }
};

GeneSet genes(std::initializer_list<const char*> names) {
    GeneSet s;
    for (auto* n : names) s.emplace(n);
    return s;
}

PatientGraphRecord record(const std::string& id, const MolecularGraph& g, const GeneVocabulary& vocab, int label) {
    FeatureLookup z, c;
    double v = 0.25;
    for (const auto& n : g.nodes()) {
        z[n] = v;
        c[n] = 1.0 - v;
        v += 0.125;
    }
    return assemble_record(id, g, z, c, vocab, label);
}

} // namespace

TEST_CASE("patient graph is the union of matched pathway graphs") {
    Store s;
    MeasuredGenes measured(genes({"A", "B", "C", "E", "F"}));

    auto path_into_triangle = build_patient_graph("S1", genes({"A", "C"}), *s.store, measured);
    REQUIRE(std::holds_alternative<MolecularGraph>(path_into_triangle));
    CHECK(std::get<MolecularGraph>(path_into_triangle) == testing::graph_of({{"A", "B"}, {"B", "C"}, {"A", "C"}}));

    auto only_first = build_patient_graph("S2", genes({"A"}), *s.store, measured);
    CHECK(std::get<MolecularGraph>(only_first) == testing::graph_of({{"A", "B"}, {"B", "C"}}));

    std::vector<GeneSymbol> unmatched;
    auto none = build_patient_graph("S3", genes({"Q"}), *s.store, measured, &unmatched);
    CHECK(std::get<Exclusion>(none).reason == "no-pathways");
    CHECK(unmatched == std::vector<GeneSymbol>{GeneSymbol("Q")});

    auto edgeless = build_patient_graph("S4", genes({"E"}), *s.store, measured);
    CHECK(std::get<Exclusion>(edgeless).reason == "no-edges");

    MeasuredGenes only_e(genes({"E"}));
    auto tiny = build_patient_graph("S5", genes({"E"}), *s.store, only_e);
    CHECK(std::get<Exclusion>(tiny).reason == "too-small");
}

TEST_CASE("records align features with graph nodes") {
    auto g = testing::graph_of({{"B", "A"}, {"B", "UNKNOWN"}});
    GeneVocabulary vocab({GeneSymbol("C"), GeneSymbol("B"), GeneSymbol("A"), GeneSymbol("B")});
    CHECK(vocab.size() == 4);
    CHECK(vocab.index_of(GeneSymbol("A")) == 1);
    CHECK(vocab.index_of(GeneSymbol("C")) == 3);
    auto rec = record("S1", g, vocab, 1);
    CHECK(rec.gene_indices == std::vector<std::int64_t>{1, 2, GeneVocabulary::unknown});
    CHECK(rec.node_features(0, 0) == 0.25);
    CHECK(rec.node_features(2, 1) == 0.5);

    FeatureLookup partial{{GeneSymbol("A"), 1.0}};
    CHECK_THROWS_AS(assemble_record("S1", g, partial, partial, vocab, 0), std::logic_error);
}

TEST_CASE("labels, split and class weights") {
    std::map<std::string, std::string> raw;
    for (int i = 0; i < 40; ++i) raw["S" + std::to_string(100 + i)] = i < 30 ? "localized" : "metastatic";
    auto enc = encode_labels(raw);
    CHECK(enc.classes == std::vector<std::string>{"localized", "metastatic"});

    auto split = stratified_split(enc.codes, 0.8, 7);
    CHECK(split.train_ids.size() == 32);
    CHECK(split.test_ids.size() == 8);
    CHECK(split.train_ids == stratified_split(enc.codes, 0.8, 7).train_ids);
    CHECK(split.train_ids != stratified_split(enc.codes, 0.8, 8).train_ids);
    int test_meta = 0;
    for (const auto& id : split.test_ids) test_meta += enc.codes.at(id);
    CHECK(test_meta == 2);

    std::map<std::string, int> pair{{"a", 0}, {"b", 0}, {"c", 1}};
    auto small = stratified_split(pair, 0.99, 1);
    CHECK(small.train_ids.size() == 2);  // a singleton class stays in train, the pair keeps one test
    CHECK(small.test_ids.size() == 1);
    CHECK_THROWS_AS(stratified_split(pair, 1.0, 1), UsageError);

    std::vector<int> train(30, 0);
    train.insert(train.end(), 10, 1);
    auto w = class_weights(train, 2);
    CHECK(w.weights[0] == doctest::Approx(0.5));
    CHECK(w.weights[1] == doctest::Approx(1.5));
    CHECK(w.class_counts == std::vector<std::size_t>{30, 10});
    CHECK_THROWS_AS(class_weights(std::vector<int>(5, 0), 2), DataError);

    auto three = class_weights({0, 1, 1, 2, 2, 2}, 3);
    double sum = 0;
    for (std::size_t c = 0; c < 3; ++c) sum += three.weights[c] * static_cast<double>(three.class_counts[c]);
    CHECK(three.weights[0] == doctest::Approx(3.0 * 6.0 / 11.0));
    CHECK(sum == doctest::Approx(3.0 * 3.0 * 6.0 / 11.0));
}

TEST_CASE("dataset export layout") {
    GeneVocabulary vocab({GeneSymbol("A"), GeneSymbol("B"), GeneSymbol("C")});
    std::vector<PatientGraphRecord> records{record("S1", testing::graph_of({{"A", "B"}, {"B", "C"}}), vocab, 0),
                                            record("S2", testing::graph_of({{"A", "C"}}), vocab, 1)};
    SplitSpec split{{"S1"}, {"S2"}, 3};
    ClassWeights w{{1.0, 1.0}, {1, 1}};
    ExportMetadata meta{{"x", "y"}, {{"S3", "no-edges"}}, json{{"tau", 80}}};

    testing::TempDir a, b;
    auto m1 = export_dataset(records, split, w, vocab, a.path(), meta);
    auto m2 = export_dataset(records, split, w, vocab, b.path(), meta);
    CHECK(m1.files == m2.files);
    CHECK(read_file(a / "manifest.json") == read_file(b / "manifest.json"));
    for (const auto& [rel, digest] : m1.files) CHECK(sha256_file(a / rel) == digest);

    // each undirected edge appears in both directions, indices follow the node order
    CHECK(read_file(a / "samples/S1.edges.tsv") == "0\t1\n1\t0\n1\t2\n2\t1\n");
    CHECK(read_file(a / "samples/S2.label") == "1\n");
    CHECK(read_file(a / "vocab.tsv") == "<unk>\t0\nA\t1\nB\t2\nC\t3\n");
    CHECK(read_file(a / "exclusions.tsv") == "S3\tno-edges\n");
    CHECK(read_file(a / "class_weights.tsv") == "0\tx\t1\t1\n1\ty\t1\t1\n");
    CHECK(read_file(a / "samples/S1.nodes.tsv") == "A\t1\t0.25\t0.75\nB\t2\t0.375\t0.625\nC\t3\t0.5\t0.5\n");

    auto doc = json::parse(read_file(a / "manifest.json"));
    CHECK(doc["num_records"] == 2);
    CHECK(doc["parameters"]["tau"] == 80);
    auto split_doc = json::parse(read_file(a / "split.json"));
    CHECK(split_doc["train"] == json::array({"S1"}));

    CHECK_THROWS_AS(export_dataset({}, split, w, vocab, a.path(), meta), DataError);
    auto bad = records;
    bad[0].sample_id = "../escape";
    CHECK_THROWS_AS(export_dataset(bad, split, w, vocab, a.path(), meta), DataError);
    bad[0].sample_id = "S2";
    CHECK_THROWS_AS(export_dataset(bad, split, w, vocab, a.path(), meta), DataError);
}
