#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conceptmap/types.hpp"

namespace conceptmap {

/// Casefolds, collapses whitespace, strips edge punctuation and leading
/// determiners (a, an, the) until nothing changes. Idempotent.
std::string normalize_field(std::string_view field);

struct NormalizedTriple {
  Triple original;
  std::string norm_subject;
  std::string norm_relation;
  std::string norm_object;
  // Information score: token count of the normalized field. Character
  // counts break ties.
  std::size_t info_subject = 0;
  std::size_t info_relation = 0;
  std::size_t info_object = 0;
  std::size_t chars_subject = 0;
  std::size_t chars_relation = 0;
  std::size_t chars_object = 0;

  const ProvenanceKey& key() const { return original.key; }
};

/// Throws Error("empty_field") when a field normalizes to nothing.
NormalizedTriple normalize(const Triple& t);

enum class Rule { SubjectRelation, SubjectObject, RelationObject, Crossover };

/// "R1".."R4".
std::string_view rule_id(Rule r);

struct Removal {
  Triple removed;
  ProvenanceKey surviving;
  Rule rule = Rule::SubjectRelation;
};

/// R1: within each (subject, relation) group only the triple with the most
/// informative object survives.
std::vector<Removal> rule_subject_relation(const std::vector<NormalizedTriple>& triples);
/// R2: within each (subject, object) group the most informative relation survives.
std::vector<Removal> rule_subject_object(const std::vector<NormalizedTriple>& triples);
/// R3: within each (relation, object) group the most informative subject survives.
std::vector<Removal> rule_relation_object(const std::vector<NormalizedTriple>& triples);
/// R4: in one sentence, if A's relation contains B's object as a whole-token
/// run, B is removed. Pairs are visited in provenance order and a triple
/// removed earlier in the sweep can no longer remove others.
std::vector<Removal> rule_crossover(const std::vector<NormalizedTriple>& triples);

struct PruneOptions {
  bool subject_relation = true;
  bool subject_object = true;
  bool relation_object = true;
  bool crossover = true;
};

struct PruneReport {
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::vector<Removal> removals;
  std::size_t passes = 0;
  /// Triples dropped before rule application because a field normalized to
  /// nothing.
  std::vector<Triple> discarded;

  nlohmann::json to_json() const;
};

struct PruneResult {
  std::vector<Triple> survivors;  // provenance-key order
  PruneReport report;
};

/// Applies R1..R4 in order, repeatedly, until a pass removes nothing.
/// Independent of input order.
PruneResult prune(const std::vector<Triple>& triples, const PruneOptions& options = {});

}  // namespace conceptmap
