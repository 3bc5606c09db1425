#include "gig/gpml.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"
#include "gig/xml.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace gig {

namespace {

void collect_points(const xml::Element& el, std::vector<std::string>& refs) {
    for (const auto& child : el.children) {
        if (child.name == "Point") {
            if (auto ref = child.attribute_any({"GraphRef", "elementRef"}); ref && !ref->empty())
                refs.push_back(*ref);
        } else {
            collect_points(child, refs);
        }
    }
}

std::vector<std::string> read_xrefs(const xml::Element& node) {
    std::vector<std::string> xrefs;
    for (const auto& child : node.children) {
        if (child.name != "Xref") continue;
        auto db = child.attribute_any({"Database", "dataSource"});
        auto id = child.attribute_any({"ID", "identifier"});
        if (!db || !id) continue;
        auto ident = std::string(trim(*id));
        if (trim(*db).empty() || ident.empty()) continue;
        xrefs.push_back(qualify_identifier(xref_namespace(*db) + ":" + ident));
    }
    return xrefs;
}

std::string database_name(std::string_view ns) {
    if (ns == "ensembl") return "Ensembl";
    if (ns == "uniprot") return "Uniprot-TrEMBL";
    if (ns == "entrez") return "Entrez Gene";
    if (ns == "hgnc") return "HGNC";
    return std::string(ns);
}

} // namespace

NodeType classify_node_type(std::string_view type_attribute) {
    auto t = to_lower(trim(type_attribute));
    if (t == "geneproduct" || t == "gene") return NodeType::gene_product;
    if (t == "protein") return NodeType::protein;
    if (t == "rna" || t == "mirna" || t == "microrna") return NodeType::rna;
    return NodeType::other;
}

bool is_microrna(const DataNode& node) {
    auto t = to_lower(trim(node.type_attribute));
    if (t == "mirna" || t == "microrna") return true;
    auto label = trim(node.label);
    if (starts_with_ci(label, "hsa-mir")) return true;
    if (starts_with_ci(label, "mir-")) return true;
    return label.size() > 3 && starts_with_ci(label, "mir") &&
           std::isdigit(static_cast<unsigned char>(label[3]));
}

std::string xref_namespace(std::string_view database) {
    auto db = to_lower(trim(database));
    if (db.starts_with("ensembl")) return "ensembl";
    if (db.starts_with("uniprot")) return "uniprot";
    if (db == "entrez gene" || db == "ncbi gene" || db == "entrezgene" || db == "geneid") return "entrez";
    if (db == "hgnc") return "hgnc";
    std::replace(db.begin(), db.end(), ' ', '_');
    std::replace(db.begin(), db.end(), ':', '_');
    return db;
}

PathwayDocument parse_gpml(std::string_view xml_bytes, const std::string& wpid) {
    if (wpid.empty()) throw GpmlSchemaError("empty pathway identifier");
    auto root = xml::parse(xml_bytes);
    if (!root) throw GpmlSchemaError(wpid + ": document has no root element");
    if (root->name != "Pathway")
        throw GpmlSchemaError(wpid + ": root element is <" + root->name + ">, expected <Pathway>");

    PathwayDocument doc;
    doc.wpid = wpid;
    std::set<std::string> seen_ids;
    std::vector<const xml::Element*> interactions;

    // DataNodes sit directly under Pathway in 2013a and under <DataNodes> in 2021.
    auto visit = [&](const xml::Element& el, auto& self) -> void {
        for (const auto& child : el.children) {
            if (child.name == "DataNode") {
                DataNode node;
                node.graph_id = child.attribute_any({"GraphId", "elementId"}).value_or("");
                if (node.graph_id.empty()) node.graph_id = "_node" + std::to_string(child.offset);
                if (!seen_ids.insert(node.graph_id).second) continue;
                node.label = child.attribute_any({"TextLabel"}).value_or("");
                node.type_attribute = child.attribute_any({"Type"}).value_or("");
                node.node_type = classify_node_type(node.type_attribute);
                node.xrefs = read_xrefs(child);
                doc.data_nodes.push_back(std::move(node));
            } else if (child.name == "Interaction") {
                interactions.push_back(&child);
            } else if (child.name == "DataNodes" || child.name == "Interactions") {
                self(child, self);
            }
        }
    };
    visit(*root, visit);

    for (const auto* el : interactions) {
        InteractionElement interaction;
        collect_points(*el, interaction.referenced_graph_ids);
        doc.interactions.push_back(std::move(interaction));
    }
    return doc;
}

std::string write_gpml(const PathwayDocument& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<Pathway xmlns=\"http://pathvisio.org/GPML/2013a\" Name=\"" << xml::escape(doc.wpid)
        << "\">\n";
    for (const auto& node : doc.data_nodes) {
        out << "  <DataNode TextLabel=\"" << xml::escape(node.label) << "\" GraphId=\""
            << xml::escape(node.graph_id) << "\"";
        if (!node.type_attribute.empty()) out << " Type=\"" << xml::escape(node.type_attribute) << "\"";
        if (node.xrefs.empty()) {
            out << " />\n";
            continue;
        }
        out << ">\n";
        for (const auto& x : node.xrefs) {
            auto colon = x.find(':');
            out << "    <Xref Database=\"" << xml::escape(database_name(x.substr(0, colon)))
                << "\" ID=\"" << xml::escape(x.substr(colon + 1)) << "\" />\n";
        }
        out << "  </DataNode>\n";
    }
    std::size_t n = 0;
    for (const auto& interaction : doc.interactions) {
        out << "  <Interaction GraphId=\"interaction" << n++ << "\">\n    <Graphics>\n";
        for (const auto& ref : interaction.referenced_graph_ids)
            out << "      <Point GraphRef=\"" << xml::escape(ref) << "\" />\n";
        out << "    </Graphics>\n  </Interaction>\n";
    }
    out << "</Pathway>\n";
    return out.str();
}

NodeResolver make_table_resolver(const GeneIdMapping& table, bool require_protein_coding) {
    return [&table, require_protein_coding](const DataNode& node) -> std::optional<GeneSymbol> {
        for (std::string_view ns : {"ensembl:", "uniprot:", "entrez:"}) {
            for (const auto& x : node.xrefs) {
                if (!x.starts_with(ns)) continue;
                if (auto s = canonicalize(x, table, require_protein_coding)) return s;
            }
        }
        if (normalize_symbol(node.label).empty()) return std::nullopt;
        return canonicalize("label:" + node.label, table, require_protein_coding);
    };
}

MolecularGraph build_pathway_graph(const PathwayDocument& doc, const NodeResolver& resolver,
                                   const GeneSet& measured) {
    std::map<std::string, GeneSymbol> retained;
    GraphBuilder buffer;
    for (const auto& node : doc.data_nodes) {
        if (node.node_type == NodeType::other || is_microrna(node)) continue;
        auto symbol = resolver(node);
        if (!symbol || !measured.contains(*symbol)) continue;
        retained.emplace(node.graph_id, *symbol);
        buffer.add_node(*symbol);
    }
    for (const auto& interaction : doc.interactions) {
        std::vector<const GeneSymbol*> members;
        std::set<std::string> seen;
        for (const auto& ref : interaction.referenced_graph_ids) {
            auto it = retained.find(ref);
            if (it != retained.end() && seen.insert(ref).second) members.push_back(&it->second);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) buffer.add_edge(*members[i], *members[j]);
        }
    }
    return strip_self_loops(buffer);
}

} // namespace gig
