#include <doctest.h>

#include "conceptmap/extract.hpp"
#include "conceptmap/pipeline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace conceptmap;

namespace {

const RuleBasedExtractor& extractor() {
  static const auto e = make_extractor(PipelineConfig{});
  return *e;
}

Document doc(std::string body, std::string id = "t") {
  Document d;
  d.doc_id = std::move(id);
  d.body = std::move(body);
  return d;
}

std::vector<std::tuple<std::string, std::string, std::string>> triples_of(const std::string& body) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& t : extractor().extract(doc(body)).triples) {
    out.emplace_back(t.subject, t.relation, t.object);
  }
  return out;
}

bool has(const std::vector<std::tuple<std::string, std::string, std::string>>& ts,
         const std::string& s, const std::string& r, const std::string& o) {
  for (const auto& [ts_, tr, to] : ts) {
    if (oracle::normalize(ts_) == oracle::normalize(s) &&
        oracle::normalize(tr) == oracle::normalize(r) &&
        oracle::normalize(to) == oracle::normalize(o)) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("named entities in the gold mention fixtures") {
  const auto cases = fixture::read_jsonl(fixture::data_dir() / "gold" / "mentions.jsonl");
  REQUIRE(cases.size() >= 13);
  for (const auto& c : cases) {
    const std::string sentence = c["sentence"];
    CAPTURE(sentence);
    const auto mentions = extractor().recognize_entities(sentence, 0);
    std::set<std::pair<std::string, std::string>> named;
    for (const auto& m : mentions) {
      if (!m.pronominal && m.entity_class != EntityClass::Unknown) {
        named.emplace(m.surface, std::string(to_string(m.entity_class)));
      }
      CHECK(sentence.substr(m.span.begin, m.span.size()) == m.surface);
    }
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& e : c["entities"]) expected.emplace(e["surface"], e["class"]);
    CHECK(named == expected);
  }
}

TEST_CASE("pronoun resolution matches the gold coreference fixtures") {
  const auto cases = fixture::read_jsonl(fixture::data_dir() / "gold" / "coref.jsonl");
  REQUIRE(cases.size() >= 9);
  for (const auto& c : cases) {
    const std::string text = c["text"];
    CAPTURE(text);
    const DocumentExtraction ex = extractor().extract(doc(text));
    std::set<std::tuple<std::string, std::size_t, std::string>> got;
    for (const auto& link : ex.resolution.links()) {
      got.emplace(link.pronoun.surface, link.pronoun.sentence_index, link.antecedent.surface);
    }
    std::set<std::tuple<std::string, std::size_t, std::string>> expected;
    for (const auto& l : c["links"]) expected.emplace(l["pronoun"], l["sentence_index"], l["antecedent"]);
    CHECK(got == expected);
  }
}

TEST_CASE("antecedents precede their pronouns within the window") {
  const Corpus corpus = fixture::gold_corpus();
  for (std::size_t window : {0u, 1u, 2u, 3u}) {
    ExtractorOptions options;
    options.coref_window = window;
    const RuleBasedExtractor e(std::make_shared<Lexicon>(extractor().lexicon()),
                               extractor().splitter(), options);
    for (const auto& d : corpus.documents()) {
      const DocumentExtraction ex = e.extract(d);
      for (const auto& link : ex.resolution.links()) {
        CHECK_FALSE(link.antecedent.pronominal);
        CHECK(link.antecedent.sentence_index <= link.pronoun.sentence_index);
        CHECK(link.pronoun.sentence_index - link.antecedent.sentence_index <= window);
        if (link.antecedent.sentence_index == link.pronoun.sentence_index) {
          CHECK(link.antecedent.span.end <= link.pronoun.span.begin);
        }
      }
    }
  }
}

TEST_CASE("window bounds the lookback") {
  ExtractorOptions narrow;
  narrow.coref_window = 0;
  const RuleBasedExtractor e(std::make_shared<Lexicon>(extractor().lexicon()),
                             extractor().splitter(), narrow);
  CHECK(e.extract(doc("John saw Mary. She smiled.")).resolution.empty());
  CHECK(extractor().extract(doc("John saw Mary. She smiled.")).resolution.size() == 1);
}

TEST_CASE("first and second person pronouns never resolve") {
  CHECK(extractor().extract(doc("John met Mary. We saw you.")).resolution.empty());
}

TEST_CASE("pronoun subjects are replaced by their antecedents") {
  const auto ts = triples_of("The group of soldiers left the bunker yesterday. They returned this morning. The men spoke to their leader.");
  CHECK(has(ts, "The group of soldiers", "left", "the bunker"));
  CHECK(has(ts, "The men", "spoke to", "their leader"));
  CHECK(ts.size() == 2);
}

TEST_CASE("prepositional tails yield nested variants") {
  const auto ts = triples_of("John met with the minister in Baghdad.");
  CHECK(has(ts, "John", "met with", "the minister"));
  CHECK(has(ts, "John", "met with the minister in", "Baghdad"));
}

TEST_CASE("coordinated objects and double objects") {
  auto ts = triples_of("The soldiers found weapons and documents.");
  CHECK(has(ts, "The soldiers", "found", "weapons"));
  CHECK(has(ts, "The soldiers", "found", "documents"));
  ts = triples_of("Omar Khalil gave him money.");
  CHECK(has(ts, "Omar Khalil", "gave", "money"));
}

TEST_CASE("triple keys are unique and ordered") {
  const Corpus corpus = fixture::gold_corpus();
  const CorpusExtraction all = extract_corpus(extractor(), corpus);
  REQUIRE_FALSE(all.triples.empty());
  for (std::size_t i = 1; i < all.triples.size(); ++i) {
    CHECK(all.triples[i - 1].key < all.triples[i].key);
  }
  for (const auto& t : all.triples) {
    CHECK_FALSE(oracle::normalize(t.subject).empty());
    CHECK_FALSE(oracle::normalize(t.relation).empty());
    CHECK_FALSE(oracle::normalize(t.object).empty());
    CHECK(corpus.find(t.key.doc_id) != nullptr);
  }
  SUBCASE("thread count does not change the output") {
    const CorpusExtraction threaded = extract_corpus(extractor(), corpus, 4);
    CHECK(threaded.triples == all.triples);
    CHECK(threaded.sentence_count == all.sentence_count);
    CHECK(threaded.mention_count == all.mention_count);
  }
}

TEST_CASE("degenerate input") {
  CHECK(triples_of("").empty());
  CHECK(triples_of("   ").empty());
  CHECK(triples_of("Hello.").empty());
  CHECK(triples_of("!!! ???").empty());
  CHECK_NOTHROW(triples_of("caf\xC3\xA9 owners met r\xC3\xA9sidents in Mosul."));
}

TEST_CASE("lexicon loading") {
  const Lexicon& lex = extractor().lexicon();
  CHECK(lex.is_verb_form("traveled"));
  CHECK(lex.verb_forms.at("struck") == "strike");
  CHECK(lex.pronouns.at("they").number == GrammaticalNumber::Plural);
  CHECK_FALSE(lex.pronouns.at("we").number.has_value());
  CHECK(inflect_verb("stop").count("stopped"));
  CHECK(inflect_verb("use").count("using"));
  try {
    Lexicon::load("/nonexistent/gazetteers");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == "unreadable_path");
  }
}
