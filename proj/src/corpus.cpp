#include "conceptmap/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "conceptmap/text.hpp"

namespace conceptmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& default_abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "adm.", "apr.", "aug.", "capt.", "cmdr.", "co.", "col.", "corp.", "cpl.", "dec.",
      "dr.",  "e.g.", "etc.", "feb.",  "fig.",  "ft.", "gen.", "gov.",  "i.e.", "inc.",
      "jan.", "jr.",  "jul.", "jun.",  "lt.",   "ltd.", "maj.", "mar.", "mr.",  "mrs.",
      "ms.",  "mt.",  "no.",  "nov.",  "oct.",  "prof.", "pvt.", "rep.", "sen.", "sep.",
      "sept.", "sgt.", "sr.", "st.",   "u.k.",  "u.n.", "u.s.", "vs."};
  return kAbbrev;
}

bool is_iso8601(const std::string& s) {
  static const std::regex kIso(
      R"(^\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?$)");
  return std::regex_match(s, kIso);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_path", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json document_to_json(const Document& d) {
  json j;
  j["doc_id"] = d.doc_id;
  j["title"] = d.title;
  j["body"] = d.body;
  if (d.report_location) j["report_location"] = *d.report_location;
  if (d.report_time) j["report_time"] = *d.report_time;
  return j;
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents, std::map<std::string, std::string> manifest)
    : documents_(std::move(documents)), manifest_(std::move(manifest)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (documents_[i].doc_id.empty()) throw Error("invalid_document", "empty doc_id");
    if (i > 0 && documents_[i].doc_id == documents_[i - 1].doc_id) {
      throw Error("duplicate_doc_id", "duplicate doc_id: " + documents_[i].doc_id);
    }
  }
}

const Document* Corpus::find(std::string_view doc_id) const {
  auto it = std::lower_bound(
      documents_.begin(), documents_.end(), doc_id,
      [](const Document& d, std::string_view id) { return d.doc_id < id; });
  if (it == documents_.end() || it->doc_id != doc_id) return nullptr;
  return &*it;
}

std::string Corpus::to_jsonl() const {
  std::string out;
  for (const auto& d : documents_) {
    out += document_to_json(d).dump();
    out += '\n';
  }
  return out;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  if (s == "plain" || s == "plain_dir") return CorpusFormat::PlainDir;
  if (s == "jsonl") return CorpusFormat::Jsonl;
  return std::nullopt;
}

std::string sanitize_body(std::string_view body, std::string_view doc_id,
                          const CorpusOptions& options) {
  if (body.size() > options.max_document_bytes) {
    throw Error("document_too_large", "document " + std::string(doc_id) + " exceeds " +
                                          std::to_string(options.max_document_bytes) + " bytes");
  }
  if (!text::valid_utf8(body)) {
    throw Error("invalid_utf8", "document " + std::string(doc_id) + " is not valid UTF-8");
  }
  std::string out;
  out.reserve(body.size());
  for (char c : body) {
    const auto u = static_cast<unsigned char>(c);
    const bool control = (u < 0x20 && c != '\n' && c != '\t') || u == 0x7F;
    if (!control) {
      out.push_back(c);
    } else if (options.control_chars == ControlCharPolicy::Reject) {
      throw Error("control_character",
                  "document " + std::string(doc_id) + " contains control characters");
    }
  }
  return out;
}

Corpus parse_jsonl_corpus(std::string_view content, std::string_view origin,
                          const CorpusOptions& options) {
  std::vector<Document> docs;
  std::map<std::string, std::string> manifest;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;

    auto fail = [&](const std::string& why) -> Error {
      return Error("malformed_record",
                   std::string(origin) + ":" + std::to_string(line_no) + ": " + why);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw fail(std::string("invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) throw fail("record is not a JSON object");
    if (!j.contains("doc_id") || !j["doc_id"].is_string() ||
        j["doc_id"].get<std::string>().empty()) {
      throw fail("missing doc_id");
    }
    if (!j.contains("body") || !j["body"].is_string()) throw fail("missing body");

    Document d;
    d.doc_id = j["doc_id"].get<std::string>();
    if (!seen.insert(d.doc_id).second) {
      throw Error("duplicate_doc_id", std::string(origin) + ":" + std::to_string(line_no) +
                                          ": duplicate doc_id " + d.doc_id);
    }
    if (j.contains("title")) {
      if (!j["title"].is_string()) throw fail("title must be a string");
      d.title = j["title"].get<std::string>();
    }
    for (const char* field : {"report_location", "report_time"}) {
      if (j.contains(field) && !j[field].is_null() && !j[field].is_string()) {
        throw fail(std::string(field) + " must be a string");
      }
    }
    if (j.contains("report_location") && j["report_location"].is_string()) {
      d.report_location = j["report_location"].get<std::string>();
    }
    if (j.contains("report_time") && j["report_time"].is_string()) {
      d.report_time = j["report_time"].get<std::string>();
      if (!is_iso8601(*d.report_time)) throw fail("report_time is not ISO-8601");
    }
    try {
      d.body = sanitize_body(j["body"].get<std::string>(), d.doc_id, options);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
    manifest[d.doc_id] = std::string(origin) + ":" + std::to_string(line_no);
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw Error("empty_corpus", std::string(origin) + " contains no documents");
  return Corpus(std::move(docs), std::move(manifest));
}

Corpus ingest_path(const fs::path& path, CorpusFormat format, const CorpusOptions& options) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error("unreadable_path", path.string() + " does not exist");

  if (format == CorpusFormat::Jsonl) {
    if (fs::is_directory(path)) {
      throw Error("unreadable_path", path.string() + " is a directory, expected a JSONL file");
    }
    return parse_jsonl_corpus(read_file(path), path.string(), options);
  }

  if (!fs::is_directory(path)) {
    // A single plain-text file becomes a one-document corpus.
    Document d;
    d.doc_id = path.filename().generic_string();
    d.title = path.stem().string();
    d.body = sanitize_body(read_file(path), d.doc_id, options);
    return Corpus({std::move(d)}, {{path.filename().generic_string(), path.string()}});
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::vector<Document> docs;
  std::map<std::string, std::string> manifest;
  for (const auto& file : files) {
    Document d;
    d.doc_id = fs::relative(file, path).generic_string();
    d.title = file.stem().string();
    d.body = sanitize_body(read_file(file), d.doc_id, options);
    manifest[d.doc_id] = file.string();
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw Error("empty_corpus", path.string() + " contains no *.txt documents");
  return Corpus(std::move(docs), std::move(manifest));
}

SentenceSplitter::SentenceSplitter() : abbreviations_(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::set<std::string> abbreviations) {
  for (const auto& a : abbreviations) {
    std::string lower = text::to_lower(text::trim(a));
    if (lower.empty()) continue;
    if (lower.back() != '.') lower += '.';
    abbreviations_.insert(std::move(lower));
  }
}

SentenceSplitter SentenceSplitter::from_file(const fs::path& path) {
  auto entries = read_list_file(path);
  return SentenceSplitter(std::set<std::string>(entries.begin(), entries.end()));
}

bool SentenceSplitter::is_abbreviation(std::string_view body, std::size_t period_pos) const {
  std::size_t start = period_pos;
  while (start > 0 && !text::is_space(body[start - 1])) --start;
  std::string_view token = body.substr(start, period_pos + 1 - start);
  while (!token.empty() && (token.front() == '"' || token.front() == '(' ||
                            token.front() == '\'' || token.front() == '[')) {
    token.remove_prefix(1);
  }
  // single-letter initials ("J. Smith")
  if (token.size() == 2 && text::is_upper(token[0])) return true;
  return abbreviations_.count(text::to_lower(token)) > 0;
}

std::vector<Span> SentenceSplitter::split(std::string_view body) const {
  std::vector<Span> spans;
  auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && text::is_space(body[b])) ++b;
    while (e > b && text::is_space(body[e - 1])) --e;
    if (e > b) spans.push_back({b, e});
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < body.size() && (body[end] == '.' || body[end] == '!' || body[end] == '?' ||
                                 body[end] == '"' || body[end] == '\'' || body[end] == ')')) {
      ++end;
    }
    std::size_t next = end;
    while (next < body.size() && text::is_space(body[next])) ++next;
    const bool has_space = next > end;
    bool capital = false;
    if (next < body.size()) {
      capital = text::is_upper(body[next]) ||
                ((body[next] == '"' || body[next] == '(' || body[next] == '\'') &&
                 next + 1 < body.size() && text::is_upper(body[next + 1]));
    }
    if (has_space && capital && !(c == '.' && is_abbreviation(body, i))) {
      push(start, end);
      start = next;
    }
    i = end;
  }
  push(start, body.size());
  return spans;
}

std::vector<Span> split_sentences(const Document& doc, const SentenceSplitter& splitter) {
  return splitter.split(doc.body);
}

std::vector<std::string> read_list_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("unreadable_path", "cannot read list file " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

}  // namespace conceptmap
