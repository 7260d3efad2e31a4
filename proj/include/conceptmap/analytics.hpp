#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conceptmap/graph.hpp"

namespace conceptmap {

/// Empty node sequence means no path.
struct PathResult {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  double total_cost = 0.0;

  bool found() const { return !nodes.empty(); }
  bool operator==(const PathResult&) const = default;
};

/// Minimum hop-count path. Among equal-cost paths the lexicographically
/// smallest node-id sequence wins; between parallel edges the smallest edge
/// id. Undirected unless `directed`. Throws Error("unknown_node").
PathResult shortest_path(const ConceptGraph& graph, NodeId source, NodeId target,
                         bool directed = false);

struct CentralityEntry {
  NodeId node = 0;
  double score = 0.0;
};

class CentralityTable {
 public:
  CentralityTable() = default;
  explicit CentralityTable(std::vector<double> scores) : scores_(std::move(scores)) {}

  const std::vector<double>& scores() const { return scores_; }
  double score(NodeId id) const { return scores_.at(id); }
  std::size_t size() const { return scores_.size(); }

  /// Score descending, node id ascending on ties. `top` = 0 means all.
  std::vector<CentralityEntry> ranking(std::size_t top = 0) const;

 private:
  std::vector<double> scores_;
};

/// Undirected closeness with component normalization:
/// r reachable nodes at distance sum S score (r / (n - 1)) * (r / S), or 0
/// when nothing is reachable.
CentralityTable closeness_centrality(const ConceptGraph& graph);

/// Edges whose stemmed relation tokens include every stemmed query token,
/// with their endpoints. Throws Error("invalid_query") when the query
/// normalizes to nothing.
Subgraph query_relations(const ConceptGraph& graph, std::string_view query);

nlohmann::json path_to_json(const ConceptGraph& graph, const PathResult& path);
nlohmann::json centrality_to_json(const ConceptGraph& graph, const CentralityTable& table,
                                  std::size_t top = 0);

}  // namespace conceptmap
