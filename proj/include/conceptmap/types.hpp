#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conceptmap {

/// Base class for every error raised by the library. `kind()` is a short
/// machine-readable code that the HTTP layer copies into error bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

enum class EntityClass { Person, Organization, Location, Unknown };

std::string_view to_string(EntityClass c);
/// Accepts "PERSON", "ORGANIZATION", "LOCATION", "UNKNOWN" (any case).
std::optional<EntityClass> parse_entity_class(std::string_view s);

enum class GrammaticalNumber { Singular, Plural, Ambiguous };

std::string_view to_string(GrammaticalNumber n);

/// (doc_id, sentence_index, triple_index): orders and identifies every
/// extracted triple.
struct ProvenanceKey {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::size_t triple_index = 0;

  auto operator<=>(const ProvenanceKey&) const = default;
  bool operator==(const ProvenanceKey&) const = default;

  bool same_sentence(const ProvenanceKey& other) const {
    return doc_id == other.doc_id && sentence_index == other.sentence_index;
  }
};

std::string to_string(const ProvenanceKey& key);

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  ProvenanceKey key;
  double confidence = 1.0;
  EntityClass subject_class = EntityClass::Unknown;
  EntityClass object_class = EntityClass::Unknown;

  bool operator==(const Triple&) const = default;
};

/// Character interval [begin, end) within a sentence.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct Mention {
  std::string doc_id;
  std::size_t sentence_index = 0;
  Span span;
  std::string surface;
  EntityClass entity_class = EntityClass::Unknown;
  bool pronominal = false;
  GrammaticalNumber number = GrammaticalNumber::Singular;

  bool operator==(const Mention&) const = default;
};

}  // namespace conceptmap
