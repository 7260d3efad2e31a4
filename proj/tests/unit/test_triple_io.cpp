#include <doctest.h>

#include "conceptmap/triple_io.hpp"
#include "fixtures.hpp"

using namespace conceptmap;
using nlohmann::json;

namespace {

std::string kind_of(const std::string& content) {
  try {
    parse_triples(content, "t.jsonl");
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

}  // namespace

TEST_CASE("triple records round trip") {
  Triple t = fixture::triple("Tupak Sumatra", "met with", "the minister", "r03", 2, 1);
  t.confidence = 0.5;
  t.subject_class = EntityClass::Person;
  const std::string line = triples_to_jsonl({t});
  CHECK(line.back() == '\n');
  const auto back = parse_triples(line, "x");
  REQUIRE(back.size() == 1);
  CHECK(back[0] == t);
}

TEST_CASE("schema violations are reported with line numbers") {
  const std::string ok = R"({"doc_id":"d","sentence_index":0,"triple_index":0,"subject":"a","relation":"b","object":"c"})";
  CHECK(parse_triples(ok + "\n\n", "x").size() == 1);
  CHECK(kind_of(ok + "\n" + ok) == "duplicate_key");
  CHECK(kind_of("not json") == "schema_violation");
  CHECK(kind_of(R"({"doc_id":"d","sentence_index":0,"triple_index":0,"subject":"a","relation":"b"})") ==
        "schema_violation");
  CHECK(kind_of(R"({"doc_id":"d","sentence_index":-1,"triple_index":0,"subject":"a","relation":"b","object":"c"})") ==
        "schema_violation");
  CHECK(kind_of(R"({"doc_id":"d","sentence_index":0,"triple_index":0,"subject":"  ","relation":"b","object":"c"})") ==
        "schema_violation");
  CHECK(kind_of(R"({"doc_id":"d","sentence_index":0,"triple_index":0,"subject":"a","relation":"b","object":"c","confidence":2})") ==
        "schema_violation");
  CHECK(kind_of(R"({"doc_id":"d","sentence_index":0,"triple_index":0,"subject":"a","relation":"b","object":"c","subject_class":"ANIMAL"})") ==
        "schema_violation");
  try {
    parse_triples(ok + "\n{}", "t.jsonl");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("atomic file writes replace content") {
  fixture::TempDir dir;
  const auto p = dir.path() / "f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(read_text_file(p) == "two");
  CHECK(std::distance(std::filesystem::directory_iterator(dir.path()),
                      std::filesystem::directory_iterator()) == 1);
  try {
    read_text_file(dir.path() / "nope");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == "unreadable_path");
  }
}
