#pragma once

#include "gig/geneid.hpp"
#include "gig/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gig {

enum class NodeType { gene_product, rna, protein, other };

struct DataNode {
    std::string graph_id;
    std::string label;
    NodeType node_type = NodeType::other;
    std::string type_attribute;       // as written in the document
    std::vector<std::string> xrefs;   // namespace-qualified, e.g. "ensembl:ENSG00000141510"

    friend bool operator==(const DataNode&, const DataNode&) = default;
};

struct InteractionElement {
    std::vector<std::string> referenced_graph_ids;

    friend bool operator==(const InteractionElement&, const InteractionElement&) = default;
};

struct PathwayDocument {
    std::string wpid;
    std::vector<DataNode> data_nodes;
    std::vector<InteractionElement> interactions;

    friend bool operator==(const PathwayDocument&, const PathwayDocument&) = default;
};

NodeType classify_node_type(std::string_view type_attribute);

// True for microRNA nodes: an miRNA/microRNA type attribute, or a label of the
// form MIR<digit>..., miR-..., or hsa-miR-....
bool is_microrna(const DataNode& node);

// Maps a GPML xref database name onto the identifier namespace used by the mapping table.
std::string xref_namespace(std::string_view database);

// Accepts both the 2013a (GraphId/TextLabel/GraphRef) and 2021
// (elementId/textLabel/elementRef) attribute spellings. Throws XmlParseError
// for malformed XML and GpmlSchemaError when the root is missing or is not a Pathway.
PathwayDocument parse_gpml(std::string_view xml_bytes, const std::string& wpid);

// Serializes the retained fields as GPML 2013a.
std::string write_gpml(const PathwayDocument& doc);

using NodeResolver = std::function<std::optional<GeneSymbol>(const DataNode&)>;

// Tries Ensembl, UniProt, then Entrez cross-references, then the label.
NodeResolver make_table_resolver(const GeneIdMapping& table, bool require_protein_coding = false);

// Keeps gene/RNA/protein nodes (microRNAs excluded) that resolve to a measured
// symbol, and joins every pair of retained nodes referenced by one interaction.
// Self-loops from symbol collapsing are dropped.
MolecularGraph build_pathway_graph(const PathwayDocument& doc, const NodeResolver& resolver,
                                   const GeneSet& measured);

} // namespace gig
