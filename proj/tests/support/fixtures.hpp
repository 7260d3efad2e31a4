#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "conceptmap/pipeline.hpp"
#include "conceptmap/triple_io.hpp"

namespace fixture {

inline std::filesystem::path data_dir() { return CONCEPTMAP_DATA_DIR; }

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

inline conceptmap::Triple triple(std::string s, std::string r, std::string o, std::string doc = "d",
                                 std::size_t sentence = 0, std::size_t index = 0) {
  conceptmap::Triple t;
  t.subject = std::move(s);
  t.relation = std::move(r);
  t.object = std::move(o);
  t.key = {std::move(doc), sentence, index};
  return t;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("conceptmap-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline conceptmap::PipelineConfig config_for(const std::filesystem::path& store) {
  conceptmap::PipelineConfig c;
  c.store_dir = store;
  c.port = 0;
  return c;
}

inline conceptmap::Corpus demo_corpus() {
  return conceptmap::parse_jsonl_corpus(conceptmap::read_text_file(data_dir() / "demo" / "demo.jsonl"),
                                        "demo.jsonl");
}

inline conceptmap::Corpus gold_corpus() {
  return conceptmap::parse_jsonl_corpus(
      conceptmap::read_text_file(data_dir() / "gold" / "reports.jsonl"), "reports.jsonl");
}

}  // namespace fixture
