#include "conceptmap/extract.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "conceptmap/text.hpp"

namespace conceptmap {

namespace {

const std::set<std::string> kDeterminers = {
    "a",    "an",   "the",  "this",    "that",    "these", "those", "some", "any",
    "each", "every", "no",  "another", "both",    "either", "neither", "all", "several",
    "many", "few",  "most", "such"};
const std::set<std::string> kPossessives = {"my", "your", "his", "its", "our", "their"};
const std::set<std::string> kAuxiliaries = {"is",  "are",   "was",    "were",  "be",   "been",
                                            "being", "am",  "has",    "have",  "had",  "will",
                                            "would", "shall", "should", "can", "could", "may",
                                            "might", "must", "do",   "does",  "did"};
const std::set<std::string> kConjunctions = {"and", "or", "but", "nor"};
const std::set<std::string> kRelatives = {"who", "whom", "which", "whose"};
const std::set<std::string> kNegations = {"not", "never", "n't"};
const std::set<std::string> kQuantifiers = {"more", "fewer", "less", "other"};
// Words that open a trailing temporal modifier inside a noun phrase.
const std::set<std::string> kTemporalOpeners = {"last", "next", "previous", "following"};
const std::set<std::string> kNumberWords = {"one", "two",  "three", "four",   "five",
                                            "six", "seven", "eight", "nine",  "ten",
                                            "eleven", "twelve", "dozen", "hundred", "thousand"};
const std::set<std::string> kNameConnectors = {"of", "al", "al-", "bin", "ibn", "el", "de", "abu"};
const std::set<std::string> kLocativePreps = {"in",     "at",     "near",   "outside",
                                              "inside", "around", "across", "throughout"};
const std::vector<std::string> kAdjectiveSuffixes = {"ern", "ous", "ful",  "ive",
                                                     "ical", "less", "able", "ible"};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_punct_char(char c) {
  return c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '"' || c == ')' ||
         c == ']' || c == '}' || c == '(' || c == '[' || c == '{' || c == '.';
}

bool is_open_punct(char c) { return c == '"' || c == '(' || c == '[' || c == '{' || c == '\''; }

bool all_punct(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return is_punct_char(c) || c == '\'' || c == '-';
  });
}

bool is_numeric(std::string_view s) {
  return !s.empty() && text::is_digit(s.front()) &&
         std::all_of(s.begin(), s.end(), [](char c) {
           return text::is_digit(c) || c == ',' || c == '.' || c == '-' || c == '/';
         });
}

// "al-Mahdi", "bin-Laden": lowercase particle, hyphen, capitalized name.
bool is_prefixed_name(std::string_view w) {
  const std::size_t dash = w.find('-');
  return dash != std::string_view::npos && dash > 0 && dash + 1 < w.size() &&
         text::is_upper(w[dash + 1]) && !text::is_upper(w[0]);
}

bool is_noun_like(Tag t) {
  return t == Tag::Noun || t == Tag::Propn || t == Tag::Num || t == Tag::Adj;
}

bool is_np_start(Tag t) {
  return t == Tag::Det || t == Tag::Poss || t == Tag::Adj || t == Tag::Num || t == Tag::Noun ||
         t == Tag::Propn;
}

// Right single quotation mark, U+2019.
constexpr std::string_view kCurlyApostrophe = "\xE2\x80\x99";

}  // namespace

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::Det: return "DET";
    case Tag::Poss: return "POSS";
    case Tag::Pron: return "PRON";
    case Tag::Prep: return "PREP";
    case Tag::Aux: return "AUX";
    case Tag::Verb: return "VERB";
    case Tag::Adv: return "ADV";
    case Tag::Adj: return "ADJ";
    case Tag::Noun: return "NOUN";
    case Tag::Propn: return "PROPN";
    case Tag::Num: return "NUM";
    case Tag::Conj: return "CONJ";
    case Tag::Rel: return "REL";
    case Tag::PosMark: return "POS";
    case Tag::Punct: return "PUNCT";
  }
  return "?";
}

std::string SentenceAnalysis::chunk_text(const Chunk& c) const {
  if (c.first >= c.last) return {};
  const std::size_t b = tokens[c.first].span.begin;
  const std::size_t e = tokens[c.last - 1].span.end;
  return text::collapse_whitespace(std::string_view(text).substr(b, e - b));
}

void ResolutionMap::add(Mention pronoun, Mention antecedent) {
  Link link{std::move(pronoun), std::move(antecedent)};
  auto pos = std::lower_bound(links_.begin(), links_.end(), link, [](const Link& a, const Link& b) {
    return std::tie(a.pronoun.sentence_index, a.pronoun.span.begin) <
           std::tie(b.pronoun.sentence_index, b.pronoun.span.begin);
  });
  links_.insert(pos, std::move(link));
}

const Mention* ResolutionMap::antecedent_of(std::size_t sentence_index, Span span) const {
  for (const auto& link : links_) {
    if (link.pronoun.sentence_index == sentence_index && link.pronoun.span == span) {
      return &link.antecedent;
    }
  }
  return nullptr;
}

std::size_t DocumentExtraction::mention_count() const {
  std::size_t n = 0;
  for (const auto& m : mentions) n += m.size();
  return n;
}

RuleBasedExtractor::RuleBasedExtractor(std::shared_ptr<const Lexicon> lexicon,
                                       SentenceSplitter splitter, ExtractorOptions options)
    : lexicon_(std::move(lexicon)), splitter_(std::move(splitter)), options_(options) {
  if (!lexicon_) throw Error("invalid_argument", "extractor requires a lexicon");
}

std::vector<Token> RuleBasedExtractor::tokenize(std::string_view s) const {
  std::vector<Token> out;
  auto emit = [&](std::size_t b, std::size_t e, std::optional<Tag> tag = std::nullopt) {
    if (e <= b) return;
    Token t;
    t.text = std::string(s.substr(b, e - b));
    t.lower = text::to_lower(t.text);
    t.span = {b, e};
    if (tag) t.tag = *tag;
    out.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j])) ++j;
    std::size_t b = i;
    std::size_t e = j;
    i = j;
    if (b == e) continue;

    while (b < e && is_open_punct(s[b])) {
      emit(b, b + 1, Tag::Punct);
      ++b;
    }
    std::vector<std::pair<std::size_t, std::size_t>> trailing;
    std::optional<std::pair<std::size_t, std::size_t>> possessive;
    while (e > b) {
      const char c = s[e - 1];
      if (c == '.') {
        std::string_view word = s.substr(b, e - b);
        const bool abbreviation =
            splitter_.abbreviations().count(text::to_lower(word)) > 0 ||
            (word.size() == 2 && text::is_upper(word[0])) ||
            word.substr(0, word.size() - 1).find('.') != std::string_view::npos;
        if (abbreviation) break;
        trailing.emplace_back(e - 1, e);
        --e;
      } else if (c == '\'' && e - b >= 2 && (s[e - 2] == 's' || s[e - 2] == 'S')) {
        possessive = std::make_pair(e - 1, e);  // soldiers'
        --e;
        break;
      } else if (is_punct_char(c) || c == '\'') {
        trailing.emplace_back(e - 1, e);
        --e;
      } else {
        break;
      }
    }
    if (!possessive && e - b > 2 && s[e - 2] == '\'' && (s[e - 1] == 's' || s[e - 1] == 'S')) {
      possessive = std::make_pair(e - 2, e);
      e -= 2;
    } else if (!possessive && e - b > 4 && s.substr(e - 4, 3) == kCurlyApostrophe &&
               (s[e - 1] == 's' || s[e - 1] == 'S')) {
      possessive = std::make_pair(e - 4, e);
      e -= 4;
    }
    emit(b, e);
    if (possessive) emit(possessive->first, possessive->second, Tag::PosMark);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      emit(it->first, it->second, Tag::Punct);
    }
  }
  return out;
}

void RuleBasedExtractor::tag(std::vector<Token>& tokens) const {
  const Lexicon& lex = *lexicon_;

  auto lexical_tag = [&](const std::string& w, std::optional<Tag> prev) -> Tag {
    if (lex.is_verb_form(w)) {
      if (prev && (*prev == Tag::Det || *prev == Tag::Poss || *prev == Tag::Adj ||
                   *prev == Tag::Num || *prev == Tag::PosMark)) {
        return Tag::Noun;
      }
      if (lex.common_nouns.count(w) &&
          !(prev && (*prev == Tag::Pron || *prev == Tag::Noun || *prev == Tag::Propn ||
                     *prev == Tag::Aux || *prev == Tag::Adv || *prev == Tag::Rel))) {
        return Tag::Noun;
      }
      return Tag::Verb;
    }
    if (lex.common_nouns.count(w) || lex.plural_nouns.count(w) || lex.collective_nouns.count(w) ||
        lex.temporal_nouns.count(w)) {
      return Tag::Noun;
    }
    if (lex.adjectives.count(w) || lex.location_modifiers.count(w)) return Tag::Adj;
    if (lex.adverbs.count(w)) return Tag::Adv;
    if (ends_with(w, "ly") && w.size() > 4) return Tag::Adv;
    for (const auto& suffix : kAdjectiveSuffixes) {
      if (ends_with(w, suffix) && w.size() > suffix.size() + 2) return Tag::Adj;
    }
    if ((ends_with(w, "ed") || ends_with(w, "ing")) && w.size() > 4) {
      if (prev && (*prev == Tag::Det || *prev == Tag::Poss || *prev == Tag::Adj ||
                   *prev == Tag::Num)) {
        return ends_with(w, "ing") ? Tag::Noun : Tag::Adj;
      }
      return Tag::Verb;
    }
    return Tag::Noun;
  };

  bool sentence_initial = true;
  std::optional<Tag> prev;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    const std::string& w = t.lower;
    if (t.tag == Tag::Punct || t.tag == Tag::PosMark) {
      // tags pre-assigned by the tokenizer
    } else if (all_punct(t.text)) {
      t.tag = Tag::Punct;
    } else if (is_numeric(w) || kNumberWords.count(w)) {
      t.tag = Tag::Num;
    } else if (kDeterminers.count(w)) {
      t.tag = Tag::Det;
    } else if (kPossessives.count(w)) {
      t.tag = Tag::Poss;
    } else if (lex.pronouns.count(w)) {
      t.tag = Tag::Pron;
    } else if (kRelatives.count(w)) {
      t.tag = Tag::Rel;
    } else if (kConjunctions.count(w)) {
      t.tag = Tag::Conj;
    } else if (kAuxiliaries.count(w)) {
      t.tag = Tag::Aux;
    } else if (kNegations.count(w)) {
      t.tag = Tag::Adv;
    } else if (lex.prepositions.count(w)) {
      t.tag = Tag::Prep;
    } else if (text::starts_with_upper(t.text) || is_prefixed_name(t.text)) {
      const bool known_lowercase =
          lex.is_verb_form(w) || lex.adjectives.count(w) || lex.adverbs.count(w) ||
          lex.common_nouns.count(w) || lex.plural_nouns.count(w) ||
          lex.collective_nouns.count(w) || lex.location_modifiers.count(w);
      t.tag = sentence_initial && known_lowercase ? lexical_tag(w, prev) : Tag::Propn;
    } else {
      t.tag = lexical_tag(w, prev);
    }
    if (t.tag != Tag::Punct) sentence_initial = false;
    prev = t.tag;
  }

  // Context fixes that need the right neighbour.
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    const std::optional<Tag> next =
        i + 1 < tokens.size() ? std::optional<Tag>(tokens[i + 1].tag) : std::nullopt;
    const bool next_nominal = next && (is_noun_like(*next) || *next == Tag::Verb);
    if (t.lower == "that") {
      t.tag = next && (*next == Tag::Noun || *next == Tag::Adj || *next == Tag::Propn) ? Tag::Det
                                                                                      : Tag::Rel;
    } else if (t.lower == "her" && t.tag == Tag::Pron && next_nominal &&
               tokens[i + 1].tag != Tag::Verb) {
      t.tag = Tag::Poss;
    } else if (t.tag == Tag::Poss && !next_nominal && lex.pronouns.count(t.lower)) {
      t.tag = Tag::Pron;  // "its" never, "his" as a bare pronoun
    }
  }
  // A clause needs a verb: with none tagged, the first noun-tagged verb form
  // that follows a nominal becomes the verb ("His drivers use forged ...").
  const bool any_verb = std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
    return t.tag == Tag::Verb || t.tag == Tag::Aux;
  });
  if (!any_verb) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (tokens[i].tag == Tag::Noun && lex.is_verb_form(tokens[i].lower) &&
          (tokens[i - 1].tag == Tag::Noun || tokens[i - 1].tag == Tag::Propn)) {
        tokens[i].tag = Tag::Verb;
        break;
      }
    }
  }
  // "use forged documents": a noun-tagged verb form between a nominal and
  // a participle that modifies a noun is the verb.
  for (std::size_t i = 2; i + 1 < tokens.size(); ++i) {
    if (tokens[i].tag == Tag::Verb && ends_with(tokens[i].lower, "ed") &&
        tokens[i + 1].tag == Tag::Noun && tokens[i - 1].tag == Tag::Noun &&
        lex.is_verb_form(tokens[i - 1].lower) &&
        (tokens[i - 2].tag == Tag::Noun || tokens[i - 2].tag == Tag::Propn)) {
      tokens[i - 1].tag = Tag::Verb;
    }
  }
  // A second verb form straight after a main verb is a modifier or the
  // object: "use forged documents", "pays bribes".
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].tag != Tag::Verb || tokens[i - 1].tag != Tag::Verb) continue;
    const bool next_nominal = i + 1 < tokens.size() && (is_noun_like(tokens[i + 1].tag) ||
                                                        tokens[i + 1].tag == Tag::Verb);
    if (ends_with(tokens[i].lower, "ed") && next_nominal) {
      tokens[i].tag = Tag::Adj;
    } else if (ends_with(tokens[i].lower, "s") && !ends_with(tokens[i].lower, "ss")) {
      tokens[i].tag = Tag::Noun;
    }
  }
  // Comparative quantifiers after a number: "three more arrests".
  for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
    if (tokens[i - 1].tag == Tag::Num && kQuantifiers.count(tokens[i].lower) &&
        (tokens[i + 1].tag == Tag::Noun || tokens[i + 1].tag == Tag::Verb)) {
      tokens[i].tag = Tag::Adj;
      if (tokens[i + 1].tag == Tag::Verb) tokens[i + 1].tag = Tag::Noun;
    }
  }
  // An auxiliary with no following verb is the main verb ("was the leader").
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].tag != Tag::Aux) continue;
    std::size_t j = i + 1;
    while (j < tokens.size() && tokens[j].tag == Tag::Adv) ++j;
    if (j >= tokens.size() || (tokens[j].tag != Tag::Verb && tokens[j].tag != Tag::Aux)) {
      tokens[i].tag = Tag::Verb;
    }
  }
}

std::vector<Chunk> RuleBasedExtractor::chunk(const std::vector<Token>& tokens) const {
  const std::size_t n = tokens.size();
  auto tag_at = [&](std::size_t i) { return i < n ? std::optional<Tag>(tokens[i].tag) : std::nullopt; };

  // Returns the end of a simple noun phrase starting at i, or i on failure.
  auto parse_simple_np = [&](std::size_t i) -> std::size_t {
    std::size_t j = i;
    if (tag_at(j) == Tag::Det || tag_at(j) == Tag::Poss) ++j;
    const std::size_t content = j;
    while (j < n) {
      const Tag t = tokens[j].tag;
      if (j > content && kTemporalOpeners.count(tokens[j].lower) && j + 1 < n &&
          lexicon_->temporal_nouns.count(tokens[j + 1].lower)) {
        break;  // "a businessman last week": the time phrase is its own chunk
      }
      if (t == Tag::Adj || t == Tag::Num || t == Tag::Noun || t == Tag::Propn) {
        ++j;
      } else if (t == Tag::Adv && tag_at(j + 1) == Tag::Adj && j > i) {
        ++j;
      } else if (t == Tag::PosMark && j > content &&
                 (tokens[j - 1].tag == Tag::Noun || tokens[j - 1].tag == Tag::Propn)) {
        ++j;
      } else {
        break;
      }
    }
    while (j > content && (tokens[j - 1].tag == Tag::PosMark || tokens[j - 1].tag == Tag::Adv)) --j;
    return j > content ? j : i;
  };

  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < n) {
    const Tag t = tokens[i].tag;
    Chunk c;
    c.first = i;
    if (t == Tag::Pron) {
      c.kind = ChunkKind::NounPhrase;
      c.pronominal = true;
      c.last = i + 1;
    } else if (is_np_start(t) && parse_simple_np(i) > i) {
      std::size_t j = parse_simple_np(i);
      const std::size_t head = j - 1;
      while (j + 1 < n && tokens[j].lower == "of" && is_np_start(tokens[j + 1].tag)) {
        const std::size_t k = parse_simple_np(j + 1);
        if (k == j + 1) break;
        j = k;
      }
      c.kind = ChunkKind::NounPhrase;
      c.last = j;
      if (lexicon_->temporal_nouns.count(tokens[head].lower) && j == head + 1) {
        bool modifiers_only = true;
        for (std::size_t k = i; k < head; ++k) {
          const Tag mt = tokens[k].tag;
          if (mt != Tag::Det && mt != Tag::Adj && mt != Tag::Num) modifiers_only = false;
        }
        c.temporal = modifiers_only;
      }
    } else if (t == Tag::Aux || t == Tag::Verb ||
               (t == Tag::Adv && (tag_at(i + 1) == Tag::Verb || tag_at(i + 1) == Tag::Aux))) {
      std::size_t j = i;
      bool has_verb = false;
      while (j < n) {
        const Tag vt = tokens[j].tag;
        if (vt == Tag::Aux || vt == Tag::Verb) {
          has_verb = true;
          ++j;
        } else if (vt == Tag::Adv) {
          ++j;
        } else if (tokens[j].lower == "to" && tag_at(j + 1) == Tag::Verb && has_verb) {
          j += 2;
        } else {
          break;
        }
      }
      while (j > i && tokens[j - 1].tag == Tag::Adv) --j;
      if (has_verb && j > i) {
        c.kind = ChunkKind::VerbGroup;
        c.last = j;
      } else {
        c.kind = ChunkKind::Adv;
        c.last = i + 1;
      }
    } else {
      c.last = i + 1;
      switch (t) {
        case Tag::Prep: c.kind = ChunkKind::Prep; break;
        case Tag::Conj: c.kind = ChunkKind::Conj; break;
        case Tag::Rel: c.kind = ChunkKind::Rel; break;
        case Tag::Adv: c.kind = ChunkKind::Adv; break;
        case Tag::Punct: c.kind = ChunkKind::Punct; break;
        default: c.kind = ChunkKind::Other; break;
      }
    }
    i = c.last;
    chunks.push_back(c);
  }
  return chunks;
}

EntityClass RuleBasedExtractor::classify_run(const std::vector<Token>& tokens, std::size_t first,
                                             std::size_t last, const std::vector<Chunk>& chunks,
                                             std::size_t chunk_index) const {
  const Lexicon& lex = *lexicon_;
  std::vector<std::string> words;
  for (std::size_t i = first; i < last; ++i) words.push_back(tokens[i].lower);
  const std::string full = text::join(words, " ");

  if (lex.persons.count(full)) return EntityClass::Person;
  if (lex.organizations.count(full)) return EntityClass::Organization;
  if (lex.locations.count(full)) return EntityClass::Location;
  if (lex.organization_suffixes.count(words.back())) return EntityClass::Organization;
  if (lex.location_features.count(words.back())) return EntityClass::Location;
  if (words.size() > 1 && lex.person_titles.count(words.front())) return EntityClass::Person;
  if (lex.is_given_name(words.front())) return EntityClass::Person;
  if (words.size() == 1) {
    // bare surname of a known person
    for (const auto& person : lex.persons) {
      const auto space = person.rfind(' ');
      if (space != std::string::npos && person.substr(space + 1) == full) {
        return EntityClass::Person;
      }
    }
  }
  for (const auto& w : words) {
    if (lex.locations.count(w)) return EntityClass::Location;
  }
  if (chunk_index > 0 && chunks[chunk_index - 1].kind == ChunkKind::Prep &&
      kLocativePreps.count(tokens[chunks[chunk_index - 1].first].lower)) {
    return EntityClass::Location;
  }
  return EntityClass::Unknown;
}

GrammaticalNumber RuleBasedExtractor::phrase_number(const std::vector<Token>& tokens,
                                                    const Chunk& c) const {
  const Lexicon& lex = *lexicon_;
  std::size_t head = c.last - 1;
  for (std::size_t i = c.first; i < c.last; ++i) {
    if (tokens[i].lower == "of" && i > c.first) {
      head = i - 1;
      break;
    }
  }
  const std::string& w = tokens[head].lower;
  if (lex.collective_nouns.count(w)) return GrammaticalNumber::Ambiguous;
  if (lex.plural_nouns.count(w)) return GrammaticalNumber::Plural;
  if (tokens[head].tag == Tag::Propn) return GrammaticalNumber::Singular;
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return GrammaticalNumber::Plural;
  }
  return GrammaticalNumber::Singular;
}

void RuleBasedExtractor::find_mentions(SentenceAnalysis& a, std::size_t position) const {
  const Lexicon& lex = *lexicon_;
  const auto& tokens = a.tokens;
  std::vector<std::pair<Mention, std::optional<std::size_t>>> found;  // mention, owning chunk

  auto make_mention = [&](std::size_t first, std::size_t last) {
    Mention m;
    m.sentence_index = position;
    m.span = {tokens[first].span.begin, tokens[last - 1].span.end};
    m.surface = a.text.substr(m.span.begin, m.span.size());
    return m;
  };

  for (std::size_t ci = 0; ci < a.chunks.size(); ++ci) {
    Chunk& c = a.chunks[ci];
    if (c.kind != ChunkKind::NounPhrase || c.temporal) continue;
    if (c.pronominal) {
      Mention m = make_mention(c.first, c.last);
      m.pronominal = true;
      const auto& info = lex.pronouns.at(tokens[c.first].lower);
      m.number = info.number.value_or(GrammaticalNumber::Ambiguous);
      found.emplace_back(std::move(m), ci);
      continue;
    }
    const std::size_t content =
        (tokens[c.first].tag == Tag::Det || tokens[c.first].tag == Tag::Poss) ? c.first + 1
                                                                              : c.first;
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = c.first;
    while (i < c.last) {
      if (tokens[i].tag != Tag::Propn) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < c.last) {
        if (tokens[j].tag == Tag::Propn) {
          ++j;
        } else if (kNameConnectors.count(tokens[j].lower) && j + 1 < c.last &&
                   tokens[j + 1].tag == Tag::Propn) {
          j += 2;
        } else {
          break;
        }
      }
      runs.emplace_back(i, j);
      i = j;
    }

    bool own_named = false;
    for (auto [rb, re] : runs) {
      EntityClass cls = EntityClass::Unknown;
      if (re < c.last && lex.location_features.count(tokens[re].lower)) {
        ++re;
        cls = EntityClass::Location;
      } else {
        cls = classify_run(tokens, rb, re, a.chunks, ci);
      }
      if (cls == EntityClass::Location && rb > content &&
          lex.location_modifiers.count(tokens[rb - 1].lower)) {
        --rb;
      }
      Mention m = make_mention(rb, re);
      m.entity_class = cls;
      const std::string& last_word = tokens[re - 1].lower;
      m.number = (cls == EntityClass::Organization || lex.collective_nouns.count(last_word))
                     ? GrammaticalNumber::Ambiguous
                     : GrammaticalNumber::Singular;
      const bool covers_phrase = runs.size() == 1 && rb == content && re == c.last;
      if (covers_phrase) own_named = true;
      found.emplace_back(std::move(m), covers_phrase ? std::optional<std::size_t>(ci)
                                                     : std::nullopt);
    }
    if (!own_named) {
      Mention m = make_mention(c.first, c.last);
      m.number = phrase_number(tokens, c);
      found.emplace_back(std::move(m), ci);
    }
  }

  std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.first.span.begin != y.first.span.begin) return x.first.span.begin < y.first.span.begin;
    return x.first.span.size() > y.first.span.size();
  });
  a.mentions.clear();
  for (auto& [m, owner] : found) {
    if (owner) a.chunks[*owner].mention = a.mentions.size();
    a.mentions.push_back(std::move(m));
  }
}

SentenceAnalysis RuleBasedExtractor::analyze(std::string_view sentence,
                                             std::size_t position) const {
  SentenceAnalysis a;
  a.text = std::string(sentence);
  a.tokens = tokenize(a.text);
  tag(a.tokens);
  a.chunks = chunk(a.tokens);
  find_mentions(a, position);
  return a;
}

std::vector<Mention> RuleBasedExtractor::recognize_entities(std::string_view sentence,
                                                            std::size_t position) const {
  return analyze(sentence, position).mentions;
}

ResolutionMap RuleBasedExtractor::resolve_coreferences(
    const Document& doc, const std::vector<std::vector<Mention>>& mentions) const {
  const Lexicon& lex = *lexicon_;
  ResolutionMap map;

  auto compatible = [&](const PronounInfo& info, const Mention& cand) {
    if (cand.pronominal) return false;
    const GrammaticalNumber want = *info.number;
    if (cand.number != GrammaticalNumber::Ambiguous && cand.number != want) return false;
    const auto words = text::split_words(cand.surface);
    const Gender cand_gender = lex.name_gender(text::to_lower(words.front()));
    // head: last word before "of", possessive stripped
    std::string head = words.back();
    for (std::size_t i = 1; i < words.size(); ++i) {
      if (text::to_lower(words[i]) == "of") {
        head = words[i - 1];
        break;
      }
    }
    const bool named_head = text::starts_with_upper(head);
    const bool animate = cand.entity_class == EntityClass::Person ||
                         lex.person_nouns.count(text::to_lower(head)) > 0 ||
                         (named_head && cand.entity_class == EntityClass::Unknown);
    if (info.gender == Gender::Male || info.gender == Gender::Female) {
      if (cand_gender != Gender::Unspecified && cand_gender != info.gender) return false;
      if (!animate) return false;
    } else if (info.gender == Gender::Neuter) {
      if (cand.entity_class == EntityClass::Person || cand_gender != Gender::Unspecified ||
          lex.person_nouns.count(text::to_lower(head))) {
        return false;
      }
    }
    return true;
  };

  for (std::size_t s = 0; s < mentions.size(); ++s) {
    for (const Mention& p : mentions[s]) {
      if (!p.pronominal) continue;
      auto it = lex.pronouns.find(text::to_lower(p.surface));
      if (it == lex.pronouns.end() || !it->second.number) continue;
      const Mention* best = nullptr;
      const std::size_t lowest = s >= options_.coref_window ? s - options_.coref_window : 0;
      // Nearest sentence first; inside a sentence the earliest compatible
      // mention wins (first-mention salience), longest span on equal starts.
      for (std::size_t t = s + 1; t-- > lowest && !best;) {
        for (const Mention& c : mentions[t]) {
          if (t == s && c.span.end > p.span.begin) continue;
          if (!compatible(it->second, c)) continue;
          if (best && c.span.begin != best->span.begin) break;
          if (!best || c.span.size() > best->span.size()) best = &c;
        }
      }
      if (best) {
        Mention pronoun = p;
        Mention antecedent = *best;
        pronoun.doc_id = doc.doc_id;
        antecedent.doc_id = doc.doc_id;
        map.add(std::move(pronoun), std::move(antecedent));
      }
    }
  }
  return map;
}

std::vector<Triple> RuleBasedExtractor::triples_for_sentence(const SentenceAnalysis& a,
                                                             const Document& doc,
                                                             std::size_t sentence_index,
                                                             const ResolutionMap& resolution) const {
  struct Argument {
    std::string text;
    EntityClass cls = EntityClass::Unknown;
  };
  auto argument = [&](const Chunk& c) -> std::optional<Argument> {
    if (c.pronominal) {
      if (!c.mention) return std::nullopt;
      const Mention* ant = resolution.antecedent_of(sentence_index, a.mentions[*c.mention].span);
      if (!ant) return std::nullopt;
      return Argument{text::collapse_whitespace(ant->surface), ant->entity_class};
    }
    Argument arg{a.chunk_text(c), EntityClass::Unknown};
    if (c.mention) arg.cls = a.mentions[*c.mention].entity_class;
    return arg;
  };

  std::vector<Triple> out;
  auto emit = [&](const Argument& subject, const std::string& relation, const Argument& object) {
    Triple t;
    t.subject = subject.text;
    t.relation = text::collapse_whitespace(relation);
    t.object = object.text;
    t.subject_class = subject.cls;
    t.object_class = object.cls;
    t.key = {doc.doc_id, sentence_index, out.size()};
    t.confidence = 1.0;
    if (!t.subject.empty() && !t.relation.empty() && !t.object.empty()) out.push_back(std::move(t));
  };

  const auto& chunks = a.chunks;
  const std::size_t n = chunks.size();
  std::optional<std::size_t> clause_subject;
  for (std::size_t k = 0; k < n; ++k) {
    if (chunks[k].kind != ChunkKind::VerbGroup) continue;

    std::optional<std::size_t> subject;
    std::size_t p = k;
    while (p > 0 && chunks[p - 1].kind == ChunkKind::Adv) --p;
    if (p > 0) {
      const Chunk& before = chunks[p - 1];
      if (before.kind == ChunkKind::NounPhrase && !before.temporal) {
        subject = p - 1;
      } else if (before.kind == ChunkKind::Rel && p >= 2 &&
                 chunks[p - 2].kind == ChunkKind::NounPhrase) {
        subject = p - 2;
      } else if (before.kind == ChunkKind::Rel && p >= 3 && chunks[p - 2].kind == ChunkKind::Punct &&
                 chunks[p - 3].kind == ChunkKind::NounPhrase) {
        subject = p - 3;
      } else if (before.kind == ChunkKind::Conj && clause_subject) {
        subject = clause_subject;
      }
    }
    if (!subject) continue;
    clause_subject = subject;

    std::string relation = a.chunk_text(chunks[k]);
    std::string adverbs;
    std::size_t q = k + 1;
    while (q < n && (chunks[q].kind == ChunkKind::Adv ||
                     (chunks[q].kind == ChunkKind::NounPhrase && chunks[q].temporal))) {
      if (chunks[q].kind == ChunkKind::Adv) adverbs += " " + a.chunk_text(chunks[q]);
      ++q;
    }
    bool prepositional = false;
    if (q < n && chunks[q].kind == ChunkKind::Prep) {
      relation += adverbs + " " + a.chunk_text(chunks[q]);
      prepositional = true;
      ++q;
    }
    if (q >= n || chunks[q].kind != ChunkKind::NounPhrase) continue;
    // double object ("gave him money"): the second phrase is the direct object
    if (!prepositional && q + 1 < n && chunks[q + 1].kind == ChunkKind::NounPhrase &&
        !chunks[q + 1].temporal) {
      ++q;
    }

    const auto subj = argument(chunks[*subject]);
    auto obj = argument(chunks[q]);
    if (subj && obj) emit(*subj, relation, *obj);
    if (!subj) continue;

    // coordinated objects: "found weapons and documents"
    bool coordinated = false;
    while (q + 2 < n && chunks[q + 1].kind == ChunkKind::Conj &&
           chunks[q + 2].kind == ChunkKind::NounPhrase &&
           !(q + 3 < n && chunks[q + 3].kind == ChunkKind::VerbGroup)) {
      if (auto other = argument(chunks[q + 2])) emit(*subj, relation, *other);
      q += 2;
      coordinated = true;
    }
    if (coordinated) continue;

    // nested prepositional attachments
    std::optional<std::string> nested;
    if (obj) nested = relation + " " + obj->text;
    ++q;
    while (q + 1 < n && chunks[q].kind == ChunkKind::Prep &&
           chunks[q + 1].kind == ChunkKind::NounPhrase) {
      auto pp_object = argument(chunks[q + 1]);
      if (nested) {
        *nested += " " + a.chunk_text(chunks[q]);
        if (pp_object) emit(*subj, *nested, *pp_object);
      }
      if (nested && pp_object) {
        *nested += " " + pp_object->text;
      } else {
        nested.reset();  // an unresolved pronoun poisons the longer variants
      }
      q += 2;
    }
  }
  return out;
}

std::vector<Triple> RuleBasedExtractor::extract_triples(const Document& doc,
                                                        const ResolutionMap& resolution) const {
  const auto spans = splitter_.split(doc.body);
  std::vector<Triple> out;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto a = analyze(std::string_view(doc.body).substr(spans[s].begin, spans[s].size()), s);
    auto triples = triples_for_sentence(a, doc, s, resolution);
    std::move(triples.begin(), triples.end(), std::back_inserter(out));
  }
  return out;
}

DocumentExtraction RuleBasedExtractor::extract(const Document& doc) const {
  DocumentExtraction result;
  result.sentences = splitter_.split(doc.body);
  std::vector<SentenceAnalysis> analyses;
  analyses.reserve(result.sentences.size());
  for (std::size_t s = 0; s < result.sentences.size(); ++s) {
    const Span sp = result.sentences[s];
    analyses.push_back(analyze(std::string_view(doc.body).substr(sp.begin, sp.size()), s));
    for (auto& m : analyses.back().mentions) m.doc_id = doc.doc_id;
    result.mentions.push_back(analyses.back().mentions);
  }
  result.resolution = resolve_coreferences(doc, result.mentions);
  for (std::size_t s = 0; s < analyses.size(); ++s) {
    auto triples = triples_for_sentence(analyses[s], doc, s, result.resolution);
    std::move(triples.begin(), triples.end(), std::back_inserter(result.triples));
  }
  return result;
}

CorpusExtraction extract_corpus(const TripleExtractor& extractor, const Corpus& corpus,
                                std::size_t threads) {
  const auto& docs = corpus.documents();
  std::vector<DocumentExtraction> results(docs.size());
  threads = std::max<std::size_t>(1, std::min(threads, docs.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) results[i] = extractor.extract(docs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < docs.size(); i = next++) {
          try {
            results[i] = extractor.extract(docs[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  CorpusExtraction out;
  for (auto& r : results) {
    out.sentence_count += r.sentences.size();
    out.mention_count += r.mention_count();
    std::move(r.triples.begin(), r.triples.end(), std::back_inserter(out.triples));
  }
  return out;
}

}  // namespace conceptmap
