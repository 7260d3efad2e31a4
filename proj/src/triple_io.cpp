#include "conceptmap/triple_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "conceptmap/text.hpp"

namespace conceptmap {

namespace fs = std::filesystem;
using nlohmann::json;

json triple_to_json(const Triple& t) {
  json j;
  j["subject"] = t.subject;
  j["relation"] = t.relation;
  j["object"] = t.object;
  j["doc_id"] = t.key.doc_id;
  j["sentence_index"] = t.key.sentence_index;
  j["triple_index"] = t.key.triple_index;
  j["confidence"] = t.confidence;
  j["subject_class"] = std::string(to_string(t.subject_class));
  j["object_class"] = std::string(to_string(t.object_class));
  return j;
}

Triple triple_from_json(const json& j) {
  auto bad = [](const std::string& why) { return Error("schema_violation", why); };
  if (!j.is_object()) throw bad("record is not a JSON object");

  auto text_field = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_string()) throw bad(std::string("missing ") + name);
    std::string v = text::collapse_whitespace(j[name].get<std::string>());
    if (v.empty()) throw bad(std::string("empty ") + name);
    return v;
  };
  auto index_field = [&](const char* name) -> std::size_t {
    if (!j.contains(name) || !j[name].is_number_integer() || j[name].get<long long>() < 0) {
      throw bad(std::string("missing or negative ") + name);
    }
    return j[name].get<std::size_t>();
  };
  auto class_field = [&](const char* name) {
    if (!j.contains(name) || j[name].is_null()) return EntityClass::Unknown;
    if (!j[name].is_string()) throw bad(std::string(name) + " must be a string");
    auto c = parse_entity_class(j[name].get<std::string>());
    if (!c) throw bad(std::string("unknown ") + name + " " + j[name].get<std::string>());
    return *c;
  };

  Triple t;
  t.subject = text_field("subject");
  t.relation = text_field("relation");
  t.object = text_field("object");
  t.key.doc_id = text_field("doc_id");
  t.key.sentence_index = index_field("sentence_index");
  t.key.triple_index = index_field("triple_index");
  if (j.contains("confidence") && !j["confidence"].is_null()) {
    if (!j["confidence"].is_number()) throw bad("confidence must be a number");
    t.confidence = j["confidence"].get<double>();
    if (!(t.confidence >= 0.0 && t.confidence <= 1.0)) throw bad("confidence outside [0,1]");
  }
  t.subject_class = class_field("subject_class");
  t.object_class = class_field("object_class");
  return t;
}

std::vector<Triple> parse_triples(std::string_view content, std::string_view origin) {
  std::vector<Triple> out;
  std::set<ProvenanceKey> keys;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    Triple t;
    try {
      t = triple_from_json(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error("schema_violation", where + "invalid JSON (" + e.what() + ")");
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    if (!keys.insert(t.key).second) {
      throw Error("duplicate_key", where + "duplicate ordering key " + to_string(t.key));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Triple> import_triples(const fs::path& path) {
  return parse_triples(read_text_file(path), path.string());
}

std::string triples_to_jsonl(const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& t : triples) {
    out += triple_to_json(t).dump();
    out += '\n';
  }
  return out;
}

void write_triples(const fs::path& path, const std::vector<Triple>& triples) {
  write_file_atomic(path, triples_to_jsonl(triples));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("unwritable_path", "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("unwritable_path", "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_path", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace conceptmap
