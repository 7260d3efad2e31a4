#pragma once

// Reference implementations used only by tests. They share no code with the
// library beyond its data types, and favour obviousness over speed.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <optional>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "conceptmap/graph.hpp"
#include "conceptmap/types.hpp"

namespace oracle {

using conceptmap::Triple;

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string normalize(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string punct = ".,;:!?\"'()[]{}`";
  for (;;) {
    std::string joined;
    for (const auto& w : words(s)) joined += (joined.empty() ? "" : " ") + w;
    std::size_t b = 0, e = joined.size();
    while (b < e && (punct.find(joined[b]) != std::string::npos || joined[b] == ' ')) ++b;
    while (e > b && (punct.find(joined[e - 1]) != std::string::npos || joined[e - 1] == ' ')) --e;
    joined = joined.substr(b, e - b);
    for (const std::string det : {"a ", "an ", "the "}) {
      if (joined.rfind(det, 0) == 0 && joined.size() > det.size()) {
        joined = joined.substr(det.size());
        break;
      }
    }
    if (joined == "a" || joined == "an" || joined == "the") joined.clear();
    if (joined == s) return s;
    s = joined;
  }
}

struct Norm {
  Triple t;
  std::string s, r, o;
};

inline bool token_run_contains(const std::string& hay, const std::string& needle) {
  const auto h = words(hay);
  const auto n = words(needle);
  if (n.empty() || n.size() > h.size()) return false;
  for (std::size_t i = 0; i + n.size() <= h.size(); ++i) {
    if (std::equal(n.begin(), n.end(), h.begin() + static_cast<long>(i))) return true;
  }
  return false;
}

// a dominates b on the measured field: more tokens, then more characters,
// then the earlier provenance key.
inline bool more_informative(const std::string& a, const conceptmap::ProvenanceKey& ka,
                             const std::string& b, const conceptmap::ProvenanceKey& kb) {
  const auto wa = words(a).size(), wb = words(b).size();
  if (wa != wb) return wa > wb;
  if (a.size() != b.size()) return a.size() > b.size();
  return ka < kb;
}

/// Pair-recheck fixed point: find the first violated rule (R1, R2, R3, then
/// R4 over key-ordered pairs), remove its victim, start again from scratch.
/// Returns survivors in key order. Cubic; only for small inputs.
inline std::vector<Triple> prune_bruteforce(const std::vector<Triple>& input) {
  std::vector<Norm> alive;
  for (const auto& t : input) {
    Norm n{t, normalize(t.subject), normalize(t.relation), normalize(t.object)};
    if (n.s.empty() || n.r.empty() || n.o.empty()) continue;
    alive.push_back(n);
  }
  std::sort(alive.begin(), alive.end(), [](const Norm& a, const Norm& b) {
    return std::tie(a.t.key, a.t.subject, a.t.relation, a.t.object) <
           std::tie(b.t.key, b.t.subject, b.t.relation, b.t.object);
  });
  for (;;) {
    std::optional<std::size_t> victim;
    for (int rule = 1; rule <= 4 && !victim; ++rule) {
      for (std::size_t a = 0; a < alive.size() && !victim; ++a) {
        for (std::size_t b = 0; b < alive.size() && !victim; ++b) {
          if (a == b) continue;
          const Norm& A = alive[a];
          const Norm& B = alive[b];
          bool hit = false;
          switch (rule) {
            case 1: hit = A.s == B.s && A.r == B.r && more_informative(A.o, A.t.key, B.o, B.t.key); break;
            case 2: hit = A.s == B.s && A.o == B.o && more_informative(A.r, A.t.key, B.r, B.t.key); break;
            case 3: hit = A.r == B.r && A.o == B.o && more_informative(A.s, A.t.key, B.s, B.t.key); break;
            default:
              hit = A.t.key.doc_id == B.t.key.doc_id &&
                    A.t.key.sentence_index == B.t.key.sentence_index &&
                    token_run_contains(A.r, B.o);
          }
          if (hit) victim = b;
        }
      }
    }
    if (!victim) break;
    alive.erase(alive.begin() + static_cast<long>(*victim));
  }
  std::vector<Triple> out;
  for (auto& n : alive) out.push_back(n.t);
  return out;
}

/// Same fixed point for large inputs: rules run as whole sweeps over
/// integer-interned fields, quadratic per rule.
inline std::vector<Triple> prune_sweep(const std::vector<Triple>& input) {
  std::vector<Norm> all;
  for (const auto& t : input) {
    Norm n{t, normalize(t.subject), normalize(t.relation), normalize(t.object)};
    if (n.s.empty() || n.r.empty() || n.o.empty()) continue;
    all.push_back(n);
  }
  std::sort(all.begin(), all.end(), [](const Norm& a, const Norm& b) {
    return std::tie(a.t.key, a.t.subject, a.t.relation, a.t.object) <
           std::tie(b.t.key, b.t.subject, b.t.relation, b.t.object);
  });
  std::map<std::string, int> ids;
  auto intern = [&](const std::string& s) { return ids.emplace(s, int(ids.size())).first->second; };
  std::map<std::pair<std::string, std::size_t>, int> sentences;
  struct Row {
    int s, r, o, sentence;
    std::size_t ws, wr, wo, cs, cr, co;
  };
  std::vector<Row> rows;
  for (const auto& n : all) {
    rows.push_back({intern(n.s), intern(n.r), intern(n.o),
                    sentences.emplace(std::make_pair(n.t.key.doc_id, n.t.key.sentence_index),
                                      int(sentences.size())).first->second,
                    words(n.s).size(), words(n.r).size(), words(n.o).size(), n.s.size(),
                    n.r.size(), n.o.size()});
  }
  // rows are in key order, so a lower index means an earlier key
  auto beats = [](std::size_t wa, std::size_t ca, std::size_t ia, std::size_t wb, std::size_t cb,
                  std::size_t ib) {
    if (wa != wb) return wa > wb;
    if (ca != cb) return ca > cb;
    return ia < ib;
  };
  std::vector<bool> alive(rows.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (int rule = 1; rule <= 3; ++rule) {
      std::vector<bool> dominated(rows.size(), false);
      for (std::size_t b = 0; b < rows.size(); ++b) {
        if (!alive[b]) continue;
        for (std::size_t a = 0; a < rows.size() && !dominated[b]; ++a) {
          if (a == b || !alive[a]) continue;
          const Row& A = rows[a];
          const Row& B = rows[b];
          if (rule == 1 && A.s == B.s && A.r == B.r) dominated[b] = beats(A.wo, A.co, a, B.wo, B.co, b);
          if (rule == 2 && A.s == B.s && A.o == B.o) dominated[b] = beats(A.wr, A.cr, a, B.wr, B.cr, b);
          if (rule == 3 && A.r == B.r && A.o == B.o) dominated[b] = beats(A.ws, A.cs, a, B.ws, B.cs, b);
        }
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (dominated[i]) {
          alive[i] = false;
          changed = true;
        }
      }
    }
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = 0; b < rows.size(); ++b) {
        if (a == b || !alive[a] || !alive[b] || rows[a].sentence != rows[b].sentence) continue;
        if (token_run_contains(all[a].r, all[b].o)) {
          alive[b] = false;
          changed = true;
        }
      }
    }
  }
  std::vector<Triple> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (alive[i]) out.push_back(all[i].t);
  }
  return out;
}

/// True when some pair of triples still violates a rule's removal condition.
inline bool any_violation(const std::vector<Triple>& ts) {
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = 0; b < ts.size(); ++b) {
      if (a == b) continue;
      const auto as = normalize(ts[a].subject), ar = normalize(ts[a].relation),
                 ao = normalize(ts[a].object);
      const auto bs = normalize(ts[b].subject), br = normalize(ts[b].relation),
                 bo = normalize(ts[b].object);
      if ((as == bs && ar == br) || (as == bs && ao == bo) || (ar == br && ao == bo)) return true;
      if (ts[a].key.same_sentence(ts[b].key) && token_run_contains(ar, bo)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- graphs

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

/// All-pairs hop distances by Floyd-Warshall.
inline std::vector<std::vector<std::size_t>> all_pairs(const conceptmap::ConceptGraph& g,
                                                       bool directed) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) {
    d[e.source][e.target] = std::min<std::size_t>(d[e.source][e.target], e.source == e.target ? 0 : 1);
    if (!directed) d[e.target][e.source] = d[e.source][e.target];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Lexicographically smallest node sequence among all shortest paths, by
/// exhaustive enumeration of simple paths of the optimal length.
inline std::vector<conceptmap::NodeId> smallest_shortest_path(const conceptmap::ConceptGraph& g,
                                                              std::size_t s, std::size_t t,
                                                              bool directed) {
  const auto d = all_pairs(g, directed);
  if (d[s][t] >= kInf) return {};
  std::vector<std::set<std::size_t>> nbr(g.node_count());
  for (const auto& e : g.edges()) {
    nbr[e.source].insert(e.target);
    if (!directed) nbr[e.target].insert(e.source);
  }
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> cur{s};
  std::function<void()> dfs = [&] {
    if (cur.size() - 1 == d[s][t]) {
      if (cur.back() == t) found.push_back(cur);
      return;
    }
    for (std::size_t v : nbr[cur.back()]) {
      if (std::find(cur.begin(), cur.end(), v) != cur.end()) continue;
      cur.push_back(v);
      dfs();
      cur.pop_back();
    }
  };
  dfs();
  return *std::min_element(found.begin(), found.end());
}

/// Closeness from all-pairs distances: r reachable others, distance sum S,
/// score (r / (n - 1)) * (r / S).
inline std::vector<double> closeness(const conceptmap::ConceptGraph& g) {
  const auto d = all_pairs(g, false);
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t r = 0, sum = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && d[v][u] < kInf) {
        ++r;
        sum += d[v][u];
      }
    }
    if (r) out[v] = (double(r) / double(n - 1)) * (double(r) / double(sum));
  }
  return out;
}

/// Ranking by exact rational comparison of r^2 / S, ties by node id.
inline std::vector<std::size_t> closeness_ranking(const conceptmap::ConceptGraph& g) {
  const auto d = all_pairs(g, false);
  const std::size_t n = g.node_count();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> frac(n, {0, 1});  // r^2, S
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t r = 0, sum = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && d[v][u] < kInf) {
        ++r;
        sum += d[v][u];
      }
    }
    if (r) frac[v] = {r * r, sum};
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return frac[a].first * frac[b].second > frac[b].first * frac[a].second;
  });
  return order;
}

/// Random graph with up to `max_nodes` nodes; parallel edges carry distinct
/// labels, self-loops allowed.
inline conceptmap::ConceptGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes,
                                             double density) {
  using namespace conceptmap;
  const std::size_t n = 1 + rng() % max_nodes;
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    Node node;
    node.id = i;
    char name[16];
    std::snprintf(name, sizeof name, "n%03u", static_cast<unsigned>(i % 1000));
    node.canonical_name = node.display_name = name;
    node.mention_count = 1;
    nodes.push_back(node);
  }
  std::set<std::tuple<std::size_t, std::size_t, std::string>> keys;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (coin(rng) < density) keys.emplace(a, b, "r" + std::to_string(rng() % 2));
    }
  }
  std::vector<Edge> edges;
  for (const auto& [a, b, label] : keys) {
    Edge e;
    e.id = edges.size();
    e.source = a;
    e.target = b;
    e.relation_label = label;
    e.relation_tokens = {label};
    e.provenance = {{"doc", 0, e.id}};
    edges.push_back(e);
  }
  return ConceptGraph(std::move(nodes), std::move(edges));
}

}  // namespace oracle
