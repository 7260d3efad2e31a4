#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conceptmap/corpus.hpp"
#include "conceptmap/types.hpp"

namespace conceptmap {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Node {
  NodeId id = 0;
  std::string canonical_name;
  std::string display_name;  // longest surface form seen
  EntityClass entity_class = EntityClass::Unknown;
  std::set<std::string> locations;  // normalized place names
  std::size_t mention_count = 0;

  bool operator==(const Node&) const = default;
};

struct Edge {
  EdgeId id = 0;
  NodeId source = 0;
  NodeId target = 0;
  std::string relation_label;  // normalized relation text
  std::vector<std::string> relation_tokens;  // stemmed
  std::optional<std::string> location;
  std::vector<ProvenanceKey> provenance;  // sorted

  bool operator==(const Edge&) const = default;
};

/// A node/edge selection inside a ConceptGraph. Always closed: every
/// listed edge has both endpoints listed.
struct Subgraph {
  std::vector<NodeId> nodes;  // ascending
  std::vector<EdgeId> edges;  // ascending

  bool empty() const { return nodes.empty(); }
  bool operator==(const Subgraph&) const = default;
};

class ConceptGraph {
 public:
  ConceptGraph() = default;
  /// Node ids must equal their positions, edge ids likewise; endpoints must
  /// exist. Rebuilds the name index and adjacency.
  ConceptGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  bool has_node(NodeId id) const { return id < nodes_.size(); }

  /// Looks a name up after normalization.
  std::optional<NodeId> find_node(std::string_view name) const;

  const std::vector<EdgeId>& out_edges(NodeId id) const { return out_.at(id); }
  const std::vector<EdgeId>& in_edges(NodeId id) const { return in_.at(id); }

  Subgraph whole() const;

  bool operator==(const ConceptGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, NodeId> name_index_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

/// One node per distinct normalized name, one edge per distinct
/// (source, target, normalized relation). Node ids follow canonical-name
/// order, so the result does not depend on triple order. Throws
/// Error("unknown_document") for a triple whose document is not in `corpus`.
ConceptGraph build_graph(const std::vector<Triple>& triples, const Corpus& corpus);

/// Canonical text serialization (header line, node records, edge records,
/// checksum line). Identical graphs give identical bytes.
std::string serialize_graph(const ConceptGraph& graph);
/// Throws Error with kind bad_magic, version_mismatch, truncated, checksum
/// or malformed_record.
ConceptGraph deserialize_graph(std::string_view data);

void save_graph(const ConceptGraph& graph, const std::filesystem::path& path);
ConceptGraph load_graph(const std::filesystem::path& path);

/// Induced subgraph of everything within `radius` undirected hops.
/// Throws Error("unknown_node").
Subgraph neighborhood(const ConceptGraph& graph, NodeId node, std::size_t radius);

/// Closes a node/edge selection: sorts, dedups and adds missing endpoints.
Subgraph make_subgraph(const ConceptGraph& graph, std::vector<NodeId> nodes,
                       std::vector<EdgeId> edges);

nlohmann::json node_to_json(const Node& n);
nlohmann::json edge_to_json(const Edge& e);
/// {"nodes": [...], "edges": [...]} for the web UI and API.
nlohmann::json export_json(const ConceptGraph& graph, const Subgraph& view);
inline nlohmann::json export_json(const ConceptGraph& graph) {
  return export_json(graph, graph.whole());
}
std::string export_graphml(const ConceptGraph& graph);

}  // namespace conceptmap
