#include "conceptmap/lexicon.hpp"

#include <cstdlib>

#include "conceptmap/corpus.hpp"
#include "conceptmap/text.hpp"

#ifndef CONCEPTMAP_DATA_DIR
#define CONCEPTMAP_DATA_DIR "data"
#endif

namespace conceptmap {

namespace fs = std::filesystem;

namespace {

std::set<std::string> load_set(const fs::path& dir, std::string_view name) {
  std::set<std::string> out;
  for (auto& entry : read_list_file(dir / name)) out.insert(text::to_lower(entry));
  return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::set<std::string> inflect_verb(std::string_view base_view) {
  const std::string base(base_view);
  std::set<std::string> forms{base};
  if (base.empty()) return forms;
  const char last = base.back();
  const bool consonant_y = last == 'y' && base.size() > 1 && !is_vowel(base[base.size() - 2]);

  if (ends_with(base, "s") || ends_with(base, "x") || ends_with(base, "z") ||
      ends_with(base, "ch") || ends_with(base, "sh")) {
    forms.insert(base + "es");
  } else if (consonant_y) {
    forms.insert(base.substr(0, base.size() - 1) + "ies");
  } else {
    forms.insert(base + "s");
  }

  if (last == 'e') {
    forms.insert(base + "d");
    forms.insert(base.substr(0, base.size() - 1) + "ing");
  } else if (consonant_y) {
    forms.insert(base.substr(0, base.size() - 1) + "ied");
    forms.insert(base + "ing");
  } else {
    forms.insert(base + "ed");
    forms.insert(base + "ing");
    // consonant-vowel-consonant endings double in some spellings (plan -> planned)
    if (base.size() >= 3 && !is_vowel(last) && last != 'w' && last != 'x' && last != 'y' &&
        is_vowel(base[base.size() - 2]) && !is_vowel(base[base.size() - 3])) {
      forms.insert(base + last + "ed");
      forms.insert(base + last + "ing");
    }
  }
  return forms;
}

bool Lexicon::is_given_name(std::string_view lower) const {
  const std::string key(lower);
  return male_names.count(key) || female_names.count(key);
}

Gender Lexicon::name_gender(std::string_view lower) const {
  const std::string key(lower);
  const bool male = male_names.count(key) > 0;
  const bool female = female_names.count(key) > 0;
  if (male && !female) return Gender::Male;
  if (female && !male) return Gender::Female;
  return Gender::Unspecified;
}

fs::path Lexicon::default_data_dir() {
  if (const char* env = std::getenv("CONCEPTMAP_DATA_DIR"); env && *env) return fs::path(env);
  return fs::path(CONCEPTMAP_DATA_DIR);
}

Lexicon Lexicon::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error("unreadable_path", "gazetteer directory not found: " + dir.string());
  }
  Lexicon lex;
  lex.persons = load_set(dir, "persons.txt");
  lex.male_names = load_set(dir, "male_names.txt");
  lex.female_names = load_set(dir, "female_names.txt");
  lex.person_titles = load_set(dir, "person_titles.txt");
  lex.organizations = load_set(dir, "organizations.txt");
  lex.organization_suffixes = load_set(dir, "organization_suffixes.txt");
  lex.locations = load_set(dir, "locations.txt");
  lex.location_features = load_set(dir, "location_features.txt");
  lex.location_modifiers = load_set(dir, "location_modifiers.txt");
  lex.collective_nouns = load_set(dir, "collective_nouns.txt");
  lex.plural_nouns = load_set(dir, "plural_nouns.txt");
  lex.temporal_nouns = load_set(dir, "temporal_nouns.txt");
  lex.prepositions = load_set(dir, "prepositions.txt");
  lex.adjectives = load_set(dir, "adjectives.txt");
  lex.adverbs = load_set(dir, "adverbs.txt");
  lex.common_nouns = load_set(dir, "common_nouns.txt");
  lex.person_nouns = load_set(dir, "person_nouns.txt");

  for (const auto& line : read_list_file(dir / "pronouns.txt")) {
    auto cols = text::split_words(text::to_lower(line));
    if (cols.size() != 3) {
      throw Error("malformed_record", "pronouns.txt: expected 3 columns in '" + line + "'");
    }
    PronounInfo info;
    if (cols[1] == "singular") {
      info.number = GrammaticalNumber::Singular;
    } else if (cols[1] == "plural") {
      info.number = GrammaticalNumber::Plural;
    }
    if (cols[2] == "male") {
      info.gender = Gender::Male;
    } else if (cols[2] == "female") {
      info.gender = Gender::Female;
    } else if (cols[2] == "neuter") {
      info.gender = Gender::Neuter;
    }
    lex.pronouns[cols[0]] = info;
  }

  for (const auto& base : load_set(dir, "verbs.txt")) {
    for (auto& form : inflect_verb(base)) lex.verb_forms.emplace(form, base);
  }
  // irregular table: base followed by its irregular forms
  for (const auto& line : read_list_file(dir / "irregular_verbs.txt")) {
    auto cols = text::split_words(text::to_lower(line));
    if (cols.empty()) continue;
    for (auto& form : inflect_verb(cols[0])) lex.verb_forms.emplace(form, cols[0]);
    for (std::size_t i = 1; i < cols.size(); ++i) lex.verb_forms[cols[i]] = cols[0];
  }
  return lex;
}

}  // namespace conceptmap
