#include <doctest.h>

#include <random>

#include "conceptmap/analytics.hpp"
#include "conceptmap/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace conceptmap;

namespace {

// Graph from "a>b" style edge specs over single-letter names; labels all "r"
// unless given after a colon ("a>b:q").
ConceptGraph letters(std::size_t n, const std::vector<std::string>& specs) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name(1, static_cast<char>('a' + i));
    nodes.push_back(Node{i, name, name, EntityClass::Unknown, {}, 1});
  }
  std::vector<Edge> edges;
  for (const auto& s : specs) {
    Edge e;
    e.id = edges.size();
    e.source = static_cast<NodeId>(s[0] - 'a');
    e.target = static_cast<NodeId>(s[2] - 'a');
    e.relation_label = s.size() > 4 ? s.substr(4) : "r";
    for (const auto& w : text::split_words(e.relation_label)) e.relation_tokens.push_back(text::stem(w));
    e.provenance = {{"d", 0, e.id}};
    edges.push_back(e);
  }
  return ConceptGraph(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_CASE("closeness on a three-node path") {
  const auto t = closeness_centrality(letters(3, {"a>b", "b>c"}));
  CHECK(t.score(0) == doctest::Approx(2.0 / 3.0));
  CHECK(t.score(1) == doctest::Approx(1.0));
  CHECK(t.score(2) == doctest::Approx(2.0 / 3.0));
  const auto rank = t.ranking();
  REQUIRE(rank.size() == 3);
  CHECK(rank[0].node == 1);
  CHECK(rank[1].node == 0);  // tie broken by id
  CHECK(rank[2].node == 2);
  CHECK(t.ranking(1).size() == 1);
}

TEST_CASE("closeness edge cases") {
  CHECK(closeness_centrality(ConceptGraph()).size() == 0);
  CHECK(closeness_centrality(letters(1, {})).score(0) == 0.0);
  // isolated node, self-loop ignored, direction ignored
  const auto t = closeness_centrality(letters(3, {"b>a", "c>c"}));
  CHECK(t.score(0) == doctest::Approx(0.5));
  CHECK(t.score(2) == 0.0);
  // parallel edges count once
  CHECK(closeness_centrality(letters(2, {"a>b", "b>a:q"})).score(0) == doctest::Approx(1.0));
}

TEST_CASE("closeness agrees with the all-pairs oracle") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const ConceptGraph g = oracle::random_graph(rng, 14, 0.12);
    const auto t = closeness_centrality(g);
    const auto expected = oracle::closeness(g);
    REQUIRE(t.size() == expected.size());
    for (std::size_t v = 0; v < expected.size(); ++v) CHECK(t.score(v) == doctest::Approx(expected[v]));
    std::vector<std::size_t> order;
    for (const auto& e : t.ranking()) order.push_back(e.node);
    CHECK(order == oracle::closeness_ranking(g));
  }
}

TEST_CASE("an edge inside a component never lowers any score") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const ConceptGraph g = oracle::random_graph(rng, 10, 0.15);
    const auto d = oracle::all_pairs(g, false);
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t a = 0; a < g.node_count(); ++a)
      for (std::size_t b = 0; b < g.node_count(); ++b)
        if (a != b && d[a][b] > 1 && d[a][b] < oracle::kInf) candidates.emplace_back(a, b);
    if (candidates.empty()) continue;
    const auto [a, b] = candidates[rng() % candidates.size()];
    std::vector<Edge> edges = g.edges();
    Edge extra;
    extra.id = edges.size();
    extra.source = a;
    extra.target = b;
    extra.relation_label = "added";
    extra.provenance = {{"d", 9, 9}};
    edges.push_back(extra);
    const ConceptGraph bigger(g.nodes(), edges);
    const auto before = closeness_centrality(g);
    const auto after = closeness_centrality(bigger);
    for (std::size_t v = 0; v < g.node_count(); ++v) CHECK(after.score(v) >= before.score(v) - 1e-12);
  }
}

TEST_CASE("a bridging edge can lower its own endpoint's score") {
  // hub a with leaves b..f; separate chain g-h-i-j-k-l; bridging a-g
  const std::vector<std::string> base{"a>b", "a>c", "a>d", "a>e", "a>f",
                                      "g>h", "h>i", "i>j", "j>k", "k>l"};
  auto bridged = base;
  bridged.push_back("a>g");
  const double before = closeness_centrality(letters(12, base)).score(0);
  const double after = closeness_centrality(letters(12, bridged)).score(0);
  CHECK(before == doctest::Approx(5.0 / 11.0));
  CHECK(after == doctest::Approx(11.0 / 26.0));
  CHECK(after < before);
}

TEST_CASE("shortest path basics") {
  const ConceptGraph g = letters(5, {"a>b", "b>c", "a>d", "d>c", "e>a"});
  PathResult p = shortest_path(g, 0, 2);
  CHECK(p.nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(p.edges == std::vector<EdgeId>{0, 1});
  CHECK(p.total_cost == 2.0);
  p = shortest_path(g, 2, 4);  // undirected by default
  CHECK(p.nodes == std::vector<NodeId>{2, 1, 0, 4});
  CHECK_FALSE(shortest_path(g, 2, 4, true).found());
  CHECK(shortest_path(g, 4, 2, true).nodes == std::vector<NodeId>{4, 0, 1, 2});
  p = shortest_path(g, 3, 3);
  CHECK(p.nodes == std::vector<NodeId>{3});
  CHECK(p.edges.empty());
  CHECK(p.total_cost == 0.0);
  CHECK_THROWS_AS(shortest_path(g, 0, 9), Error);
  CHECK_FALSE(shortest_path(letters(2, {}), 0, 1).found());
}

TEST_CASE("parallel edges resolve to the smallest edge id") {
  const ConceptGraph g = letters(2, {"a>b:x", "b>a:y", "a>b:z"});
  CHECK(shortest_path(g, 0, 1).edges == std::vector<EdgeId>{0});
  CHECK(shortest_path(g, 1, 0).edges == std::vector<EdgeId>{0});
  CHECK(shortest_path(g, 1, 0, true).edges == std::vector<EdgeId>{1});
}

TEST_CASE("shortest paths agree with exhaustive enumeration") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 150; ++i) {
    const ConceptGraph g = oracle::random_graph(rng, 9, 0.2);
    const bool directed = i % 2;
    const std::size_t s = rng() % g.node_count(), t = rng() % g.node_count();
    const PathResult p = shortest_path(g, s, t, directed);
    const auto expected = oracle::smallest_shortest_path(g, s, t, directed);
    CHECK(p.nodes == expected);
    REQUIRE(p.edges.size() + (p.found() ? 1 : 0) == p.nodes.size());
    for (std::size_t k = 0; k < p.edges.size(); ++k) {
      const Edge& e = g.edge(p.edges[k]);
      const bool forward = e.source == p.nodes[k] && e.target == p.nodes[k + 1];
      const bool backward = e.target == p.nodes[k] && e.source == p.nodes[k + 1];
      CHECK((forward || (!directed && backward)));
    }
    CHECK(shortest_path(g, s, t, directed) == p);
  }
}

TEST_CASE("relation queries match stemmed token subsets") {
  const ConceptGraph g =
      letters(4, {"a>b:preached at", "b>c:preaches", "c>d:traveled to", "d>a:met with"});
  CHECK(query_relations(g, "preach").edges == std::vector<EdgeId>{0, 1});
  CHECK(query_relations(g, "Preaching AT").edges == std::vector<EdgeId>{0});
  const Subgraph travel = query_relations(g, "travels");
  CHECK(travel.edges == std::vector<EdgeId>{2});
  CHECK(travel.nodes == std::vector<NodeId>{2, 3});
  CHECK(query_relations(g, "bombed").empty());
  CHECK_THROWS_AS(query_relations(g, "  "), Error);
}

TEST_CASE("JSON views") {
  const ConceptGraph g = letters(3, {"a>b", "b>c"});
  const auto pj = path_to_json(g, shortest_path(g, 0, 2));
  CHECK(pj["found"] == true);
  CHECK(pj["nodes"] == nlohmann::json::array({0, 1, 2}));
  CHECK(pj["names"] == nlohmann::json::array({"a", "b", "c"}));
  CHECK(pj["total_cost"] == 2.0);
  CHECK(path_to_json(g, PathResult{})["found"] == false);
  const auto cj = centrality_to_json(g, closeness_centrality(g), 1);
  REQUIRE(cj["scores"].size() == 1);
  CHECK(cj["scores"][0]["node"] == 1);
  CHECK(cj["scores"][0]["name"] == "b");
}

TEST_CASE("analytics are read-only and bounded") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const ConceptGraph g = oracle::random_graph(rng, 10, 0.2);
    const std::string before = serialize_graph(g);
    const CentralityTable table = closeness_centrality(g);
    for (double s : table.scores()) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0 + 1e-12);
    }
    const PathResult p = shortest_path(g, 0, g.node_count() - 1);
    // every prefix of a shortest path is itself shortest
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      CHECK(shortest_path(g, p.nodes[0], p.nodes[k]).total_cost == double(k));
    }
    const Subgraph q = query_relations(g, "r0");
    for (EdgeId e : q.edges) {
      CHECK(std::binary_search(q.nodes.begin(), q.nodes.end(), g.edge(e).source));
      CHECK(std::binary_search(q.nodes.begin(), q.nodes.end(), g.edge(e).target));
    }
    CHECK(serialize_graph(g) == before);
  }
}
