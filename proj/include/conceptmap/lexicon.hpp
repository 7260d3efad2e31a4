#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "conceptmap/types.hpp"

namespace conceptmap {

enum class Gender { Male, Female, Neuter, Unspecified };

struct PronounInfo {
  /// nullopt for first/second person pronouns, which never resolve.
  std::optional<GrammaticalNumber> number;
  Gender gender = Gender::Unspecified;
};

/// Word lists backing the rule-based extractor. Loaded from a gazetteer
/// directory; every file is UTF-8, one entry per line, '#' comments. All
/// entries are stored lowercase.
struct Lexicon {
  std::set<std::string> persons;              // full names
  std::set<std::string> male_names;           // given names
  std::set<std::string> female_names;
  std::set<std::string> person_titles;        // "dr.", "general", "sheikh"
  std::set<std::string> organizations;        // full names
  std::set<std::string> organization_suffixes;
  std::set<std::string> locations;            // full names
  std::set<std::string> location_features;    // "river", "province"
  std::set<std::string> location_modifiers;   // "eastern", "northern"
  std::set<std::string> collective_nouns;
  std::set<std::string> plural_nouns;         // irregular plurals ("men")
  std::set<std::string> temporal_nouns;
  std::set<std::string> prepositions;
  std::set<std::string> adjectives;
  std::set<std::string> adverbs;
  std::set<std::string> common_nouns;         // noun reading preferred over verb reading
  std::set<std::string> person_nouns;         // heads denoting people ("minister")
  std::map<std::string, PronounInfo> pronouns;
  /// Every inflected verb form (generated from base forms and the irregular
  /// table) mapped to its base form.
  std::map<std::string, std::string> verb_forms;

  static Lexicon load(const std::filesystem::path& dir);
  /// Directory of the gazetteers installed with the library; overridable with
  /// the CONCEPTMAP_DATA_DIR environment variable.
  static std::filesystem::path default_data_dir();

  bool is_verb_form(std::string_view lower) const { return verb_forms.count(std::string(lower)); }
  bool is_given_name(std::string_view lower) const;
  Gender name_gender(std::string_view lower) const;
};

/// Regular inflections of an English base verb (-s, -ed, -ing, with
/// e-dropping and consonant doubling variants).
std::set<std::string> inflect_verb(std::string_view base);

}  // namespace conceptmap
