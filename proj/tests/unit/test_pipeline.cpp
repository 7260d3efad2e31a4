#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "conceptmap/pipeline.hpp"
#include "conceptmap/synth.hpp"
#include "fixtures.hpp"

using namespace conceptmap;
namespace fs = std::filesystem;

namespace {

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

// Sets an environment variable for the lifetime of the guard.
struct EnvGuard {
  std::string name;
  EnvGuard(std::string n, const char* value) : name(std::move(n)) { ::setenv(name.c_str(), value, 1); }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("config defaults and JSON round trip") {
  const PipelineConfig d;
  CHECK(d.port == 8080);
  CHECK(d.coref_window == 2);
  CHECK(d.resolved_gazetteer_dir() == fixture::data_dir() / "gazetteers");
  CHECK(d.resolved_abbreviations_file() == fixture::data_dir() / "abbreviations.txt");

  PipelineConfig c;
  c.host = "0.0.0.0";
  c.port = 9000;
  c.static_dir = "/srv/www";
  c.coref_window = 1;
  c.threads = 3;
  c.prune.crossover = false;
  c.corpus.control_chars = ControlCharPolicy::Reject;
  const PipelineConfig back = PipelineConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK_FALSE(back.prune.crossover);
  CHECK(back.static_dir == std::optional<fs::path>("/srv/www"));
}

TEST_CASE("config validation") {
  using nlohmann::json;
  CHECK(kind_of([] { PipelineConfig::from_json(json{{"prot", 1}}); }) == "bad_config");
  CHECK(kind_of([] { PipelineConfig::from_json(json{{"port", "x"}}); }) == "bad_config");
  CHECK(kind_of([] { PipelineConfig::from_json(json{{"port", 70000}}); }) == "bad_config");
  CHECK(kind_of([] { PipelineConfig::from_json(json{{"prune", {{"R5", true}}}}); }) == "bad_config");
  CHECK(kind_of([] { PipelineConfig::from_json(json::array()); }) == "bad_config");
  CHECK(PipelineConfig::from_json(json{{"prune", {{"R2", false}}}}).prune.subject_object == false);

  fixture::TempDir dir;
  std::ofstream(dir.path() / "bad.json") << "{not json";
  CHECK(kind_of([&] { load_config(dir.path() / "bad.json"); }) == "bad_config");
  std::ofstream(dir.path() / "ok.json") << R"({"port": 1234, "coref_window": 3})";
  const PipelineConfig ok = load_config(dir.path() / "ok.json");
  CHECK(ok.port == 1234);
  CHECK(ok.coref_window == 3);
}

TEST_CASE("environment overrides win over the file") {
  fixture::TempDir dir;
  std::ofstream(dir.path() / "c.json") << R"({"port": 1234, "threads": 2})";
  EnvGuard port("CONCEPTMAP_PORT", "4321");
  EnvGuard store("CONCEPTMAP_STORE", "/tmp/elsewhere");
  EnvGuard r4("CONCEPTMAP_PRUNE_R4", "off");
  EnvGuard window("CONCEPTMAP_COREF_WINDOW", "0");
  const PipelineConfig c = load_config(dir.path() / "c.json");
  CHECK(c.port == 4321);
  CHECK(c.threads == 2);
  CHECK(c.store_dir == "/tmp/elsewhere");
  CHECK_FALSE(c.prune.crossover);
  CHECK(c.coref_window == 0);
  {
    EnvGuard bad("CONCEPTMAP_THREADS", "-1");
    CHECK(kind_of([] { load_config(std::nullopt); }) == "bad_config");
  }
  {
    EnvGuard bad("CONCEPTMAP_PRUNE_R1", "maybe");
    CHECK(kind_of([] { load_config(std::nullopt); }) == "bad_config");
  }
  {
    EnvGuard bad("CONCEPTMAP_PORT", "99999");
    CHECK(kind_of([] { load_config(std::nullopt); }) == "bad_config");
  }
}

TEST_CASE("a full run persists a consistent store") {
  fixture::TempDir dir;
  const PipelineConfig config = fixture::config_for(dir.path() / "store");
  std::vector<std::string> stages;
  std::shared_ptr<PipelineArtifacts> artifacts;
  const PipelineRun run = run_pipeline(fixture::demo_corpus(), config, "r1", &artifacts,
                                       [&](const PipelineRun& r) { stages.push_back(r.stage); });
  REQUIRE(run.status == RunStatus::Done);
  CHECK(stages == std::vector<std::string>{"extract", "prune", "build", "persist", "persist"});
  CHECK(run.documents == 2);
  CHECK(run.raw_triples >= run.pruned_triples);
  CHECK(run.pruned_triples == artifacts->pruned.size());
  CHECK(run.nodes == artifacts->graph.node_count());
  CHECK(run.timings.size() == 4);

  const StorePaths store{config.store_dir};
  CHECK(read_text_file(store.current()) == "r1\n");
  for (const char* f : {"raw.jsonl", "pruned.jsonl", "report.json", "graph.spg", "run.json"}) {
    CHECK(fs::exists(store.run_dir("r1") / f));
  }
  CHECK(load_graph(store.graph()) == artifacts->graph);
  const auto loaded = load_current(config.store_dir);
  REQUIRE(loaded);
  CHECK(loaded->run_id == "r1");
  CHECK(loaded->raw == artifacts->raw);
  CHECK(loaded->pruned == artifacts->pruned);
  CHECK(loaded->graph == artifacts->graph);
  const auto stored = PipelineRun::from_json(
      nlohmann::json::parse(read_text_file(store.run_dir("r1") / "run.json")));
  CHECK(stored.status == RunStatus::Done);
  CHECK(stored.to_json()["counters"] == run.to_json()["counters"]);
}

TEST_CASE("runs are deterministic") {
  fixture::TempDir a, b;
  const Corpus corpus = synth::generate_corpus(40, 5);
  PipelineConfig ca = fixture::config_for(a.path());
  PipelineConfig cb = fixture::config_for(b.path());
  cb.threads = 3;
  REQUIRE(run_pipeline(corpus, ca, "x").status == RunStatus::Done);
  REQUIRE(run_pipeline(corpus, cb, "x").status == RunStatus::Done);
  for (const char* f : {"raw.jsonl", "pruned.jsonl", "report.json", "graph.spg"}) {
    CHECK(read_text_file(StorePaths{a.path()}.run_dir("x") / f) ==
          read_text_file(StorePaths{b.path()}.run_dir("x") / f));
  }
}

TEST_CASE("a failing stage is named and leaves the store untouched") {
  fixture::TempDir dir;
  PipelineConfig config = fixture::config_for(dir.path() / "store");
  REQUIRE(run_pipeline(fixture::demo_corpus(), config, "good").status == RunStatus::Done);
  const std::string graph_before = read_text_file(StorePaths{config.store_dir}.graph());

  SUBCASE("extract") {
    config.gazetteer_dir = dir.path() / "no-such-dir";
    const PipelineRun run = run_pipeline(fixture::demo_corpus(), config, "bad");
    CHECK(run.status == RunStatus::Failed);
    CHECK(run.stage == "extract");
    CHECK_FALSE(run.error.empty());
  }
  SUBCASE("persist") {
    // a regular file where the run directory's parent should be
    fs::remove_all(StorePaths{config.store_dir}.root / "runs");
    std::ofstream(StorePaths{config.store_dir}.root / "runs") << "blocker";
    const PipelineRun run = run_pipeline(fixture::demo_corpus(), config, "bad");
    CHECK(run.status == RunStatus::Failed);
    CHECK(run.stage == "persist");
    fs::remove(StorePaths{config.store_dir}.root / "runs");
  }
  const StorePaths store{config.store_dir};
  CHECK_FALSE(fs::exists(store.run_dir("bad")));
  CHECK_FALSE(fs::exists(store.root / "runs" / ".staging-bad"));
  CHECK(read_text_file(store.current()) == "good\n");
  CHECK(read_text_file(store.graph()) == graph_before);
}

TEST_CASE("precondition errors") {
  fixture::TempDir dir;
  const PipelineConfig config = fixture::config_for(dir.path());
  CHECK(kind_of([&] { run_pipeline(Corpus(), config, "x"); }) == "empty_corpus");
  CHECK(kind_of([&] { run_pipeline(fixture::demo_corpus(), config, "../x"); }) == "bad_run_id");
  CHECK(kind_of([&] { run_pipeline(fixture::demo_corpus(), config, ""); }) == "bad_run_id");
  CHECK(load_current(dir.path() / "empty") == nullptr);
}

TEST_CASE("a corrupt store is reported on load") {
  fixture::TempDir dir;
  const PipelineConfig config = fixture::config_for(dir.path());
  REQUIRE(run_pipeline(fixture::demo_corpus(), config, "r").status == RunStatus::Done);
  std::string bytes = read_text_file(StorePaths{dir.path()}.graph());
  bytes[20] ^= 1;
  write_file_atomic(StorePaths{dir.path()}.graph(), bytes);
  CHECK(kind_of([&] { load_current(dir.path()); }) == "checksum");
}

TEST_CASE("synthetic corpora are reproducible") {
  CHECK(synth::generate_corpus(10, 1).to_jsonl() == synth::generate_corpus(10, 1).to_jsonl());
  CHECK(synth::generate_corpus(10, 1).to_jsonl() != synth::generate_corpus(10, 2).to_jsonl());
  CHECK(synth::generate_corpus(10, 1).size() == 10);
  const auto stress = synth::generate_stress_triples(500, 3);
  CHECK(stress.size() == 500);
  CHECK(stress == synth::generate_stress_triples(500, 3));
}
