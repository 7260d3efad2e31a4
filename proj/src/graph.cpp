#include "conceptmap/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <deque>
#include <sstream>
#include <tuple>

#include <zlib.h>

#include "conceptmap/dominate.hpp"
#include "conceptmap/text.hpp"
#include "conceptmap/triple_io.hpp"

namespace conceptmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "SPIDERGRAPH";
constexpr std::string_view kVersion = "v1";
constexpr std::string_view kChecksumPrefix = "CHECKSUM ";

std::string crc_hex(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc & 0xffffffffUL));
  return buf;
}

std::size_t class_rank(EntityClass c) {
  switch (c) {
    case EntityClass::Person: return 0;
    case EntityClass::Organization: return 1;
    case EntityClass::Location: return 2;
    case EntityClass::Unknown: break;
  }
  return 3;
}

struct NameStats {
  std::size_t mentions = 0;
  std::array<std::size_t, 4> class_votes{};
  std::string display;
  std::set<std::string> locations;
};

EntityClass majority_class(const std::array<std::size_t, 4>& votes) {
  // precedence Person > Organization > Location among known classes; UNKNOWN
  // loses every tie
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (votes[i] > votes[best]) best = i;
  }
  if (votes[best] == 0 || votes[best] < votes[3]) return EntityClass::Unknown;
  static constexpr std::array<EntityClass, 3> kKnown = {
      EntityClass::Person, EntityClass::Organization, EntityClass::Location};
  return kKnown[best];
}

void offer_display(NameStats& stats, const std::string& surface) {
  const std::string s = text::collapse_whitespace(surface);
  if (stats.display.empty() || s.size() > stats.display.size() ||
      (s.size() == stats.display.size() && s < stats.display)) {
    stats.display = s;
  }
}

json key_to_json(const ProvenanceKey& k) { return json::array({k.doc_id, k.sentence_index, k.triple_index}); }

}  // namespace

ConceptGraph::ConceptGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  out_.assign(nodes_.size(), {});
  in_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) throw Error("malformed_record", "node ids must be dense and ordered");
    if (!name_index_.emplace(nodes_[i].canonical_name, i).second) {
      throw Error("malformed_record", "duplicate canonical name " + nodes_[i].canonical_name);
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != i) throw Error("malformed_record", "edge ids must be dense and ordered");
    if (e.source >= nodes_.size() || e.target >= nodes_.size()) {
      throw Error("malformed_record", "edge " + std::to_string(i) + " references a missing node");
    }
    if (e.provenance.empty()) {
      throw Error("malformed_record", "edge " + std::to_string(i) + " has no provenance");
    }
    out_[e.source].push_back(i);
    in_[e.target].push_back(i);
  }
}

const Node& ConceptGraph::node(NodeId id) const {
  if (id >= nodes_.size()) throw Error("unknown_node", "unknown node id " + std::to_string(id));
  return nodes_[id];
}

const Edge& ConceptGraph::edge(EdgeId id) const {
  if (id >= edges_.size()) throw Error("unknown_edge", "unknown edge id " + std::to_string(id));
  return edges_[id];
}

std::optional<NodeId> ConceptGraph::find_node(std::string_view name) const {
  auto it = name_index_.find(normalize_field(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

Subgraph ConceptGraph::whole() const {
  Subgraph s;
  s.nodes.resize(nodes_.size());
  s.edges.resize(edges_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) s.nodes[i] = i;
  for (std::size_t i = 0; i < edges_.size(); ++i) s.edges[i] = i;
  return s;
}

ConceptGraph build_graph(const std::vector<Triple>& triples, const Corpus& corpus) {
  std::map<std::string, NameStats> names;
  struct EdgeAcc {
    std::vector<std::string> tokens;
    std::vector<ProvenanceKey> provenance;
  };
  std::map<std::tuple<std::string, std::string, std::string>, EdgeAcc> edge_acc;

  for (const auto& t : triples) {
    const Document* doc = corpus.find(t.key.doc_id);
    if (!doc) {
      throw Error("unknown_document",
                  "triple " + to_string(t.key) + " references a document not in the corpus");
    }
    NormalizedTriple n;
    try {
      n = normalize(t);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("cannot build graph: ") + e.what());
    }
    NameStats& subject = names[n.norm_subject];
    NameStats& object = names[n.norm_object];
    subject.mentions++;
    object.mentions++;
    subject.class_votes[class_rank(t.subject_class)]++;
    object.class_votes[class_rank(t.object_class)]++;
    offer_display(subject, t.subject);
    offer_display(object, t.object);
    if (t.object_class == EntityClass::Location) subject.locations.insert(n.norm_object);
    if (doc->report_location) {
      const std::string place = normalize_field(*doc->report_location);
      if (!place.empty()) {
        subject.locations.insert(place);
        object.locations.insert(place);
      }
    }
    auto& acc = edge_acc[{n.norm_subject, n.norm_object, n.norm_relation}];
    if (acc.tokens.empty()) {
      for (const auto& w : text::split_words(n.norm_relation)) acc.tokens.push_back(text::stem(w));
    }
    acc.provenance.push_back(t.key);
  }

  std::vector<Node> nodes;
  std::map<std::string, NodeId> ids;
  for (auto& [name, stats] : names) {  // std::map: canonical-name order
    Node node;
    node.id = nodes.size();
    node.canonical_name = name;
    node.display_name = stats.display;
    node.entity_class = majority_class(stats.class_votes);
    node.locations = std::move(stats.locations);
    node.mention_count = stats.mentions;
    ids[name] = node.id;
    nodes.push_back(std::move(node));
  }

  std::vector<Edge> edges;
  std::vector<std::tuple<NodeId, NodeId, std::string, EdgeAcc*>> order;
  for (auto& [key, acc] : edge_acc) {
    order.emplace_back(ids.at(std::get<0>(key)), ids.at(std::get<1>(key)), std::get<2>(key), &acc);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  for (auto& [source, target, label, acc] : order) {
    Edge e;
    e.id = edges.size();
    e.source = source;
    e.target = target;
    e.relation_label = label;
    e.relation_tokens = acc->tokens;
    e.provenance = acc->provenance;
    std::sort(e.provenance.begin(), e.provenance.end());

    std::vector<std::string> shared;
    std::set_intersection(nodes[source].locations.begin(), nodes[source].locations.end(),
                          nodes[target].locations.begin(), nodes[target].locations.end(),
                          std::back_inserter(shared));
    if (shared.size() == 1) {
      e.location = shared.front();
    } else if (const Document* doc = corpus.find(e.provenance.front().doc_id);
               doc && doc->report_location && !normalize_field(*doc->report_location).empty()) {
      e.location = normalize_field(*doc->report_location);
    }
    edges.push_back(std::move(e));
  }
  return ConceptGraph(std::move(nodes), std::move(edges));
}

json node_to_json(const Node& n) {
  json j;
  j["id"] = n.id;
  j["name"] = n.display_name;
  j["canonical_name"] = n.canonical_name;
  j["class"] = std::string(to_string(n.entity_class));
  j["locations"] = json(std::vector<std::string>(n.locations.begin(), n.locations.end()));
  j["mention_count"] = n.mention_count;
  return j;
}

json edge_to_json(const Edge& e) {
  json j;
  j["id"] = e.id;
  j["source"] = e.source;
  j["target"] = e.target;
  j["label"] = e.relation_label;
  j["relation_tokens"] = e.relation_tokens;
  j["location"] = e.location ? json(*e.location) : json(nullptr);
  j["provenance"] = json::array();
  for (const auto& k : e.provenance) j["provenance"].push_back(key_to_json(k));
  return j;
}

std::string serialize_graph(const ConceptGraph& graph) {
  std::string out;
  out += kMagic;
  out += ' ';
  out += kVersion;
  out += '\n';
  for (const Node& n : graph.nodes()) {
    json rec = json::array({"N", n.id, n.canonical_name, n.display_name,
                            std::string(to_string(n.entity_class)), n.mention_count,
                            std::vector<std::string>(n.locations.begin(), n.locations.end())});
    out += rec.dump();
    out += '\n';
  }
  for (const Edge& e : graph.edges()) {
    json prov = json::array();
    for (const auto& k : e.provenance) prov.push_back(key_to_json(k));
    json rec = json::array({"E", e.id, e.source, e.target, e.relation_label, e.relation_tokens,
                            e.location ? json(*e.location) : json(nullptr), prov});
    out += rec.dump();
    out += '\n';
  }
  const std::string crc = crc_hex(out);
  out += kChecksumPrefix;
  out += crc;
  out += '\n';
  return out;
}

ConceptGraph deserialize_graph(std::string_view data) {
  const std::size_t header_end = data.find('\n');
  const std::string_view header = data.substr(0, header_end);
  if (header.substr(0, kMagic.size()) != kMagic) {
    throw Error("bad_magic", "not a graph file (missing SPIDERGRAPH header)");
  }
  if (header != std::string(kMagic) + " " + std::string(kVersion)) {
    throw Error("version_mismatch", "unsupported graph file version: " + std::string(header));
  }
  if (data.empty() || data.back() != '\n') throw Error("truncated", "graph file is truncated");
  const std::size_t last_line = data.rfind('\n', data.size() - 2);
  if (last_line == std::string_view::npos || last_line < header_end) {
    throw Error("truncated", "graph file has no checksum line");
  }
  const std::string_view checksum_line = data.substr(last_line + 1, data.size() - last_line - 2);
  if (checksum_line.substr(0, kChecksumPrefix.size()) != kChecksumPrefix) {
    throw Error("truncated", "graph file has no checksum line");
  }
  const std::string_view body = data.substr(0, last_line + 1);
  if (checksum_line.substr(kChecksumPrefix.size()) != crc_hex(body)) {
    throw Error("checksum", "graph file checksum mismatch");
  }

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::size_t pos = header_end + 1;
  std::size_t line_no = 1;
  while (pos < body.size()) {
    const std::size_t nl = body.find('\n', pos);
    const std::string_view line = body.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string where = "graph record " + std::to_string(line_no) + ": ";
    try {
      const json rec = json::parse(line);
      const std::string type = rec.at(0).get<std::string>();
      if (type == "N") {
        if (!edges.empty()) throw Error("malformed_record", where + "node after edges");
        Node n;
        n.id = rec.at(1).get<NodeId>();
        n.canonical_name = rec.at(2).get<std::string>();
        n.display_name = rec.at(3).get<std::string>();
        auto cls = parse_entity_class(rec.at(4).get<std::string>());
        if (!cls) throw Error("malformed_record", where + "bad entity class");
        n.entity_class = *cls;
        n.mention_count = rec.at(5).get<std::size_t>();
        for (const auto& l : rec.at(6)) n.locations.insert(l.get<std::string>());
        nodes.push_back(std::move(n));
      } else if (type == "E") {
        Edge e;
        e.id = rec.at(1).get<EdgeId>();
        e.source = rec.at(2).get<NodeId>();
        e.target = rec.at(3).get<NodeId>();
        e.relation_label = rec.at(4).get<std::string>();
        e.relation_tokens = rec.at(5).get<std::vector<std::string>>();
        if (!rec.at(6).is_null()) e.location = rec.at(6).get<std::string>();
        for (const auto& k : rec.at(7)) {
          e.provenance.push_back(
              {k.at(0).get<std::string>(), k.at(1).get<std::size_t>(), k.at(2).get<std::size_t>()});
        }
        edges.push_back(std::move(e));
      } else {
        throw Error("malformed_record", where + "unknown record type " + type);
      }
    } catch (const json::exception& e) {
      throw Error("malformed_record", where + e.what());
    }
  }
  try {
    return ConceptGraph(std::move(nodes), std::move(edges));
  } catch (const Error& e) {
    throw Error("malformed_record", std::string("graph file: ") + e.what());
  }
}

void save_graph(const ConceptGraph& graph, const fs::path& path) {
  write_file_atomic(path, serialize_graph(graph));
}

ConceptGraph load_graph(const fs::path& path) { return deserialize_graph(read_text_file(path)); }

Subgraph make_subgraph(const ConceptGraph& graph, std::vector<NodeId> nodes,
                       std::vector<EdgeId> edges) {
  for (EdgeId e : edges) {
    nodes.push_back(graph.edge(e).source);
    nodes.push_back(graph.edge(e).target);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return {std::move(nodes), std::move(edges)};
}

Subgraph neighborhood(const ConceptGraph& graph, NodeId start, std::size_t radius) {
  graph.node(start);  // throws unknown_node
  std::vector<std::size_t> dist(graph.node_count(), SIZE_MAX);
  std::deque<NodeId> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] == radius) continue;
    auto visit = [&](NodeId v) {
      if (dist[v] == SIZE_MAX) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    };
    for (EdgeId e : graph.out_edges(u)) visit(graph.edge(e).target);
    for (EdgeId e : graph.in_edges(u)) visit(graph.edge(e).source);
  }
  Subgraph s;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (dist[v] != SIZE_MAX) s.nodes.push_back(v);
  }
  for (const Edge& e : graph.edges()) {
    if (dist[e.source] != SIZE_MAX && dist[e.target] != SIZE_MAX) s.edges.push_back(e.id);
  }
  return s;
}

json export_json(const ConceptGraph& graph, const Subgraph& view) {
  json j;
  j["nodes"] = json::array();
  j["edges"] = json::array();
  for (NodeId n : view.nodes) j["nodes"].push_back(node_to_json(graph.node(n)));
  for (EdgeId e : view.edges) j["edges"].push_back(edge_to_json(graph.edge(e)));
  return j;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string export_graphml(const ConceptGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
      << "  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n"
      << "  <key id=\"mentions\" for=\"node\" attr.name=\"mention_count\" attr.type=\"int\"/>\n"
      << "  <key id=\"label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"location\" for=\"edge\" attr.name=\"location\" attr.type=\"string\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (const Node& n : graph.nodes()) {
    out << "    <node id=\"n" << n.id << "\">"
        << "<data key=\"name\">" << xml_escape(n.display_name) << "</data>"
        << "<data key=\"class\">" << to_string(n.entity_class) << "</data>"
        << "<data key=\"mentions\">" << n.mention_count << "</data></node>\n";
  }
  for (const Edge& e : graph.edges()) {
    out << "    <edge id=\"e" << e.id << "\" source=\"n" << e.source << "\" target=\"n" << e.target
        << "\"><data key=\"label\">" << xml_escape(e.relation_label) << "</data>";
    if (e.location) out << "<data key=\"location\">" << xml_escape(*e.location) << "</data>";
    out << "</edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

}  // namespace conceptmap
