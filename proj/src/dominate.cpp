#include "conceptmap/dominate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "conceptmap/text.hpp"
#include "conceptmap/triple_io.hpp"

namespace conceptmap {

namespace {

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"': case '\'':
    case '(': case ')': case '[': case ']': case '{': case '}': case '`':
      return true;
    default:
      return false;
  }
}

// Orders candidates inside one group: more information first, then more
// characters, then the earlier provenance key.
bool better(std::size_t info_a, std::size_t chars_a, const ProvenanceKey& key_a,
            std::size_t info_b, std::size_t chars_b, const ProvenanceKey& key_b) {
  if (info_a != info_b) return info_a > info_b;
  if (chars_a != chars_b) return chars_a > chars_b;
  return key_a < key_b;
}

enum class Field { Subject, Relation, Object };

const std::string& field(const NormalizedTriple& t, Field f) {
  switch (f) {
    case Field::Subject: return t.norm_subject;
    case Field::Relation: return t.norm_relation;
    case Field::Object: break;
  }
  return t.norm_object;
}

std::pair<std::size_t, std::size_t> info(const NormalizedTriple& t, Field f) {
  switch (f) {
    case Field::Subject: return {t.info_subject, t.chars_subject};
    case Field::Relation: return {t.info_relation, t.chars_relation};
    case Field::Object: break;
  }
  return {t.info_object, t.chars_object};
}

std::vector<Removal> group_rule(const std::vector<NormalizedTriple>& triples, Field g1, Field g2,
                                Field measured, Rule rule) {
  // '\x1f' cannot appear in a normalized field (it is a control character).
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    std::string key = field(triples[i], g1) + '\x1f' + field(triples[i], g2);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(i);
  }
  std::vector<Removal> removals;
  for (const auto& key : order) {
    const auto& members = groups[key];
    if (members.size() < 2) continue;
    std::size_t winner = members.front();
    for (std::size_t idx : members) {
      const auto [wi, wc] = info(triples[winner], measured);
      const auto [ci, cc] = info(triples[idx], measured);
      if (better(ci, cc, triples[idx].key(), wi, wc, triples[winner].key())) winner = idx;
    }
    for (std::size_t idx : members) {
      if (idx != winner) removals.push_back({triples[idx].original, triples[winner].key(), rule});
    }
  }
  std::sort(removals.begin(), removals.end(),
            [](const Removal& a, const Removal& b) { return a.removed.key < b.removed.key; });
  return removals;
}

}  // namespace

std::string normalize_field(std::string_view input) {
  std::string s = text::collapse_whitespace(text::to_lower(input));
  while (true) {
    const std::string before = s;
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (is_edge_punct(s[b]) || text::is_space(s[b]))) ++b;
    while (e > b && (is_edge_punct(s[e - 1]) || text::is_space(s[e - 1]))) --e;
    s = s.substr(b, e - b);
    for (std::string_view det : {"a ", "an ", "the "}) {
      if (s.size() > det.size() && s.compare(0, det.size(), det) == 0) {
        s = text::collapse_whitespace(s.substr(det.size()));
        break;
      }
    }
    if (s == "a" || s == "an" || s == "the") s.clear();
    if (s == before) return s;
  }
}

NormalizedTriple normalize(const Triple& t) {
  NormalizedTriple n;
  n.original = t;
  n.norm_subject = normalize_field(t.subject);
  n.norm_relation = normalize_field(t.relation);
  n.norm_object = normalize_field(t.object);
  if (n.norm_subject.empty() || n.norm_relation.empty() || n.norm_object.empty()) {
    throw Error("empty_field", "triple " + to_string(t.key) + " has a field that normalizes to nothing");
  }
  n.info_subject = text::split_words(n.norm_subject).size();
  n.info_relation = text::split_words(n.norm_relation).size();
  n.info_object = text::split_words(n.norm_object).size();
  n.chars_subject = n.norm_subject.size();
  n.chars_relation = n.norm_relation.size();
  n.chars_object = n.norm_object.size();
  return n;
}

std::string_view rule_id(Rule r) {
  switch (r) {
    case Rule::SubjectRelation: return "R1";
    case Rule::SubjectObject: return "R2";
    case Rule::RelationObject: return "R3";
    case Rule::Crossover: break;
  }
  return "R4";
}

std::vector<Removal> rule_subject_relation(const std::vector<NormalizedTriple>& triples) {
  return group_rule(triples, Field::Subject, Field::Relation, Field::Object, Rule::SubjectRelation);
}

std::vector<Removal> rule_subject_object(const std::vector<NormalizedTriple>& triples) {
  return group_rule(triples, Field::Subject, Field::Object, Field::Relation, Rule::SubjectObject);
}

std::vector<Removal> rule_relation_object(const std::vector<NormalizedTriple>& triples) {
  return group_rule(triples, Field::Relation, Field::Object, Field::Subject, Rule::RelationObject);
}

std::vector<Removal> rule_crossover(const std::vector<NormalizedTriple>& triples) {
  std::vector<std::size_t> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return triples[a].key() < triples[b].key();
  });

  std::vector<Removal> removals;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && triples[order[end]].key().same_sentence(triples[order[start]].key())) {
      ++end;
    }
    if (end - start >= 2) {
      std::vector<std::vector<std::string>> relation_tokens;
      std::vector<std::vector<std::string>> object_tokens;
      for (std::size_t i = start; i < end; ++i) {
        relation_tokens.push_back(text::split_words(triples[order[i]].norm_relation));
        object_tokens.push_back(text::split_words(triples[order[i]].norm_object));
      }
      std::vector<bool> alive(end - start, true);
      for (std::size_t a = 0; a < alive.size(); ++a) {
        for (std::size_t b = 0; b < alive.size(); ++b) {
          if (a == b || !alive[a] || !alive[b]) continue;
          if (text::contains_token_sequence(relation_tokens[a], object_tokens[b])) {
            alive[b] = false;
            removals.push_back({triples[order[start + b]].original,
                                triples[order[start + a]].key(), Rule::Crossover});
          }
        }
      }
    }
    start = end;
  }
  std::sort(removals.begin(), removals.end(),
            [](const Removal& a, const Removal& b) { return a.removed.key < b.removed.key; });
  return removals;
}

PruneResult prune(const std::vector<Triple>& triples, const PruneOptions& options) {
  PruneResult result;
  result.report.input_count = triples.size();

  std::vector<NormalizedTriple> alive;
  alive.reserve(triples.size());
  for (const auto& t : triples) {
    try {
      alive.push_back(normalize(t));
    } catch (const Error&) {
      result.report.discarded.push_back(t);
    }
  }
  std::sort(alive.begin(), alive.end(), [](const NormalizedTriple& a, const NormalizedTriple& b) {
    return std::tie(a.original.key, a.original.subject, a.original.relation, a.original.object) <
           std::tie(b.original.key, b.original.subject, b.original.relation, b.original.object);
  });
  std::sort(result.report.discarded.begin(), result.report.discarded.end(),
            [](const Triple& a, const Triple& b) { return a.key < b.key; });

  using RuleFn = std::vector<Removal> (*)(const std::vector<NormalizedTriple>&);
  std::vector<RuleFn> rules;
  if (options.subject_relation) rules.push_back(&rule_subject_relation);
  if (options.subject_object) rules.push_back(&rule_subject_object);
  if (options.relation_object) rules.push_back(&rule_relation_object);
  if (options.crossover) rules.push_back(&rule_crossover);

  while (true) {
    ++result.report.passes;
    std::size_t removed_this_pass = 0;
    for (RuleFn rule : rules) {
      auto removals = rule(alive);
      if (removals.empty()) continue;
      removed_this_pass += removals.size();
      std::multiset<std::tuple<ProvenanceKey, std::string, std::string, std::string>> gone;
      for (const auto& r : removals) {
        gone.emplace(r.removed.key, r.removed.subject, r.removed.relation, r.removed.object);
      }
      std::vector<NormalizedTriple> next;
      next.reserve(alive.size() - removals.size());
      for (auto& t : alive) {
        auto it = gone.find(std::make_tuple(t.original.key, t.original.subject,
                                            t.original.relation, t.original.object));
        if (it != gone.end()) {
          gone.erase(it);
          continue;
        }
        next.push_back(std::move(t));
      }
      alive = std::move(next);
      std::move(removals.begin(), removals.end(), std::back_inserter(result.report.removals));
    }
    if (removed_this_pass == 0) break;
  }

  result.survivors.reserve(alive.size());
  for (auto& t : alive) result.survivors.push_back(std::move(t.original));
  result.report.output_count = result.survivors.size();
  return result;
}

nlohmann::json PruneReport::to_json() const {
  nlohmann::json j;
  j["input_count"] = input_count;
  j["output_count"] = output_count;
  j["passes"] = passes;
  j["removals"] = nlohmann::json::array();
  for (const auto& r : removals) {
    nlohmann::json entry;
    entry["rule"] = std::string(rule_id(r.rule));
    entry["removed_key"] = {r.removed.key.doc_id, r.removed.key.sentence_index,
                            r.removed.key.triple_index};
    entry["surviving_key"] = {r.surviving.doc_id, r.surviving.sentence_index,
                              r.surviving.triple_index};
    entry["removed"] = triple_to_json(r.removed);
    j["removals"].push_back(std::move(entry));
  }
  j["discarded"] = nlohmann::json::array();
  for (const auto& t : discarded) j["discarded"].push_back(triple_to_json(t));
  return j;
}

}  // namespace conceptmap
