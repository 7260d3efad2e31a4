#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conceptmap/corpus.hpp"
#include "conceptmap/lexicon.hpp"
#include "conceptmap/types.hpp"

namespace conceptmap {

enum class Tag {
  Det,
  Poss,  // possessive determiner: their, his
  Pron,
  Prep,
  Aux,
  Verb,
  Adv,
  Adj,
  Noun,
  Propn,
  Num,
  Conj,
  Rel,
  PosMark,  // 's
  Punct,
};

std::string_view to_string(Tag t);

struct Token {
  std::string text;
  std::string lower;
  Span span;
  Tag tag = Tag::Noun;
};

enum class ChunkKind { NounPhrase, VerbGroup, Prep, Conj, Rel, Adv, Punct, Other };

struct Chunk {
  ChunkKind kind = ChunkKind::Other;
  std::size_t first = 0;  // token range [first, last)
  std::size_t last = 0;
  bool pronominal = false;
  bool temporal = false;
  /// Index into SentenceAnalysis::mentions of the mention standing for the
  /// whole noun phrase, if any.
  std::optional<std::size_t> mention;
};

/// Tokens, chunks and mentions of one sentence.
struct SentenceAnalysis {
  std::string text;
  std::vector<Token> tokens;
  std::vector<Chunk> chunks;
  std::vector<Mention> mentions;  // ordered by span start

  std::string chunk_text(const Chunk& c) const;
};

/// Pronoun -> antecedent links for one document, ordered by pronoun position.
class ResolutionMap {
 public:
  struct Link {
    Mention pronoun;
    Mention antecedent;
  };

  void add(Mention pronoun, Mention antecedent);
  const Mention* antecedent_of(std::size_t sentence_index, Span span) const;
  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  bool operator==(const ResolutionMap&) const = default;

 private:
  std::vector<Link> links_;
};

struct DocumentExtraction {
  std::vector<Span> sentences;
  std::vector<std::vector<Mention>> mentions;  // per sentence
  ResolutionMap resolution;
  std::vector<Triple> triples;

  std::size_t mention_count() const;
};

/// Pluggable extraction backend.
class TripleExtractor {
 public:
  virtual ~TripleExtractor() = default;
  virtual DocumentExtraction extract(const Document& doc) const = 0;
};

struct ExtractorOptions {
  std::size_t coref_window = 2;  // sentences of lookback
};

/// Deterministic gazetteer + lexicon driven extractor: tags tokens, chunks
/// noun phrases and verb groups, classifies entity mentions, resolves
/// pronouns to the nearest compatible antecedent and emits
/// (NP, VG [prep], NP) triples with nested prepositional variants.
class RuleBasedExtractor : public TripleExtractor {
 public:
  RuleBasedExtractor(std::shared_ptr<const Lexicon> lexicon, SentenceSplitter splitter,
                     ExtractorOptions options = {});

  SentenceAnalysis analyze(std::string_view sentence, std::size_t position) const;

  std::vector<Mention> recognize_entities(std::string_view sentence, std::size_t position) const;

  ResolutionMap resolve_coreferences(const Document& doc,
                                     const std::vector<std::vector<Mention>>& mentions) const;

  std::vector<Triple> extract_triples(const Document& doc, const ResolutionMap& resolution) const;

  DocumentExtraction extract(const Document& doc) const override;

  const Lexicon& lexicon() const { return *lexicon_; }
  const SentenceSplitter& splitter() const { return splitter_; }
  const ExtractorOptions& options() const { return options_; }

 private:
  std::vector<Token> tokenize(std::string_view sentence) const;
  void tag(std::vector<Token>& tokens) const;
  std::vector<Chunk> chunk(const std::vector<Token>& tokens) const;
  void find_mentions(SentenceAnalysis& analysis, std::size_t position) const;
  EntityClass classify_run(const std::vector<Token>& tokens, std::size_t first, std::size_t last,
                           const std::vector<Chunk>& chunks, std::size_t chunk_index) const;
  GrammaticalNumber phrase_number(const std::vector<Token>& tokens, const Chunk& c) const;
  std::vector<Triple> triples_for_sentence(const SentenceAnalysis& analysis,
                                           const Document& doc, std::size_t sentence_index,
                                           const ResolutionMap& resolution) const;

  std::shared_ptr<const Lexicon> lexicon_;
  SentenceSplitter splitter_;
  ExtractorOptions options_;
};

/// Whole-corpus extraction; documents may be processed concurrently, output
/// is merged in corpus order.
struct CorpusExtraction {
  std::size_t sentence_count = 0;
  std::size_t mention_count = 0;
  std::vector<Triple> triples;
};

CorpusExtraction extract_corpus(const TripleExtractor& extractor, const Corpus& corpus,
                                std::size_t threads = 1);

}  // namespace conceptmap
