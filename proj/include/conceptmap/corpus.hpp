#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "conceptmap/types.hpp"

namespace conceptmap {

struct Document {
  std::string doc_id;
  std::string title;
  std::string body;
  std::optional<std::string> report_location;
  std::optional<std::string> report_time;  // ISO-8601

  bool operator==(const Document&) const = default;
};

enum class ControlCharPolicy { Strip, Reject };

struct CorpusOptions {
  std::size_t max_document_bytes = 1 << 20;
  ControlCharPolicy control_chars = ControlCharPolicy::Strip;
};

/// Immutable, doc_id-ordered collection of documents.
class Corpus {
 public:
  Corpus() = default;
  /// Validates and sorts. Throws Error("duplicate_doc_id") on collisions.
  Corpus(std::vector<Document> documents, std::map<std::string, std::string> manifest = {});

  const std::vector<Document>& documents() const { return documents_; }
  const std::map<std::string, std::string>& source_manifest() const { return manifest_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  /// nullptr when absent.
  const Document* find(std::string_view doc_id) const;

  /// One JSON object per line, documents in corpus order.
  std::string to_jsonl() const;

 private:
  std::vector<Document> documents_;
  std::map<std::string, std::string> manifest_;
};

enum class CorpusFormat { PlainDir, Jsonl };

std::optional<CorpusFormat> parse_corpus_format(std::string_view s);

/// Checks UTF-8, strips or rejects control characters other than LF/TAB and
/// enforces the size limit. Returns the cleaned body.
std::string sanitize_body(std::string_view body, std::string_view doc_id,
                          const CorpusOptions& options);

Corpus ingest_path(const std::filesystem::path& path, CorpusFormat format,
                   const CorpusOptions& options = {});

/// Parses JSONL text (one document per line). `origin` names the source in
/// error messages and the manifest.
Corpus parse_jsonl_corpus(std::string_view content, std::string_view origin,
                          const CorpusOptions& options = {});

/// Sentence boundary detection: [.!?] followed by whitespace and an
/// uppercase letter (optionally behind an opening quote), unless the token
/// ending at the period is a known abbreviation.
class SentenceSplitter {
 public:
  SentenceSplitter();  // built-in abbreviation list
  explicit SentenceSplitter(std::set<std::string> abbreviations);

  static SentenceSplitter from_file(const std::filesystem::path& path);

  std::vector<Span> split(std::string_view body) const;

  const std::set<std::string>& abbreviations() const { return abbreviations_; }

 private:
  bool is_abbreviation(std::string_view body, std::size_t period_pos) const;

  std::set<std::string> abbreviations_;  // lowercase, with trailing period
};

std::vector<Span> split_sentences(const Document& doc,
                                  const SentenceSplitter& splitter = SentenceSplitter());

/// Reads a one-entry-per-line UTF-8 list; blank lines and '#' comments skipped.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

}  // namespace conceptmap
