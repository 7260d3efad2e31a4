#include "conceptmap/analytics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "conceptmap/dominate.hpp"
#include "conceptmap/text.hpp"

namespace conceptmap {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// Hop distance from every node to `target`. Directed mode follows edges
// backwards so that dist[v] is the length of a forward path v -> target.
std::vector<std::size_t> distances_to(const ConceptGraph& graph, NodeId target, bool directed) {
  std::vector<std::size_t> dist(graph.node_count(), kUnreached);
  std::deque<NodeId> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    auto visit = [&](NodeId v) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    };
    for (EdgeId e : graph.in_edges(u)) visit(graph.edge(e).source);
    if (!directed) {
      for (EdgeId e : graph.out_edges(u)) visit(graph.edge(e).target);
    }
  }
  return dist;
}

}  // namespace

PathResult shortest_path(const ConceptGraph& graph, NodeId source, NodeId target, bool directed) {
  graph.node(source);
  graph.node(target);
  const auto dist = distances_to(graph, target, directed);
  PathResult result;
  if (dist[source] == kUnreached) return result;

  // Greedy descent: at each step the smallest neighbour one hop closer to
  // the target yields the lexicographically smallest node sequence.
  NodeId u = source;
  result.nodes.push_back(u);
  while (u != target) {
    NodeId best_node = kUnreached;
    EdgeId best_edge = kUnreached;
    auto consider = [&](EdgeId e, NodeId v) {
      if (dist[v] + 1 != dist[u]) return;
      if (v < best_node || (v == best_node && e < best_edge)) {
        best_node = v;
        best_edge = e;
      }
    };
    for (EdgeId e : graph.out_edges(u)) consider(e, graph.edge(e).target);
    if (!directed) {
      for (EdgeId e : graph.in_edges(u)) consider(e, graph.edge(e).source);
    }
    result.nodes.push_back(best_node);
    result.edges.push_back(best_edge);
    u = best_node;
  }
  result.total_cost = static_cast<double>(result.edges.size());
  return result;
}

std::vector<CentralityEntry> CentralityTable::ranking(std::size_t top) const {
  std::vector<CentralityEntry> out;
  out.reserve(scores_.size());
  for (NodeId i = 0; i < scores_.size(); ++i) out.push_back({i, scores_[i]});
  std::stable_sort(out.begin(), out.end(), [](const CentralityEntry& a, const CentralityEntry& b) {
    return a.score > b.score;
  });
  if (top != 0 && top < out.size()) out.resize(top);
  return out;
}

CentralityTable closeness_centrality(const ConceptGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : graph.edges()) {
    if (e.source == e.target) continue;
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::vector<double> scores(n, 0.0);
  std::vector<std::size_t> dist(n);
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    dist[s] = 0;
    queue.assign(1, s);
    std::size_t reached = 0;
    std::size_t total = 0;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : adj[u]) {
        if (dist[v] != kUnreached) continue;
        dist[v] = dist[u] + 1;
        ++reached;
        total += dist[v];
        queue.push_back(v);
      }
    }
    if (reached > 0) {
      const double r = static_cast<double>(reached);
      scores[s] = (r / static_cast<double>(n - 1)) * (r / static_cast<double>(total));
    }
  }
  return CentralityTable(std::move(scores));
}

Subgraph query_relations(const ConceptGraph& graph, std::string_view query) {
  const auto words = text::split_words(normalize_field(query));
  if (words.empty()) throw Error("invalid_query", "relation query is empty");
  std::set<std::string> wanted;
  for (const auto& w : words) wanted.insert(text::stem(w));

  std::vector<EdgeId> edges;
  for (const Edge& e : graph.edges()) {
    const std::set<std::string> have(e.relation_tokens.begin(), e.relation_tokens.end());
    if (std::includes(have.begin(), have.end(), wanted.begin(), wanted.end())) {
      edges.push_back(e.id);
    }
  }
  return make_subgraph(graph, {}, std::move(edges));
}

nlohmann::json path_to_json(const ConceptGraph& graph, const PathResult& path) {
  nlohmann::json j;
  j["found"] = path.found();
  j["nodes"] = path.nodes;
  j["edges"] = path.edges;
  j["total_cost"] = path.total_cost;
  j["names"] = nlohmann::json::array();
  for (NodeId n : path.nodes) j["names"].push_back(graph.node(n).display_name);
  return j;
}

nlohmann::json centrality_to_json(const ConceptGraph& graph, const CentralityTable& table,
                                  std::size_t top) {
  nlohmann::json j;
  j["scores"] = nlohmann::json::array();
  for (const auto& entry : table.ranking(top)) {
    j["scores"].push_back({{"node", entry.node},
                           {"name", graph.node(entry.node).display_name},
                           {"score", entry.score}});
  }
  return j;
}

}  // namespace conceptmap
