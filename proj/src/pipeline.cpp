#include "conceptmap/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "conceptmap/lexicon.hpp"
#include "conceptmap/text.hpp"
#include "conceptmap/triple_io.hpp"

namespace conceptmap {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path PipelineConfig::resolved_gazetteer_dir() const {
  return gazetteer_dir.empty() ? Lexicon::default_data_dir() / "gazetteers" : gazetteer_dir;
}

fs::path PipelineConfig::resolved_abbreviations_file() const {
  return abbreviations_file.empty() ? Lexicon::default_data_dir() / "abbreviations.txt"
                                    : abbreviations_file;
}

json PipelineConfig::to_json() const {
  json j;
  j["host"] = host;
  j["port"] = port;
  j["store"] = store_dir.string();
  j["gazetteer_dir"] = resolved_gazetteer_dir().string();
  j["abbreviations"] = resolved_abbreviations_file().string();
  j["static_dir"] = static_dir ? json(static_dir->string()) : json(nullptr);
  j["coref_window"] = coref_window;
  j["threads"] = threads;
  j["max_document_bytes"] = corpus.max_document_bytes;
  j["control_chars"] = corpus.control_chars == ControlCharPolicy::Strip ? "strip" : "reject";
  j["prune"] = {{"R1", prune.subject_relation},
                {"R2", prune.subject_object},
                {"R3", prune.relation_object},
                {"R4", prune.crossover}};
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error("bad_config", "config must be a JSON object");
  PipelineConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "host") {
        c.host = value.get<std::string>();
      } else if (key == "port") {
        c.port = value.get<int>();
      } else if (key == "store") {
        c.store_dir = value.get<std::string>();
      } else if (key == "gazetteer_dir") {
        c.gazetteer_dir = value.get<std::string>();
      } else if (key == "abbreviations") {
        c.abbreviations_file = value.get<std::string>();
      } else if (key == "static_dir") {
        if (!value.is_null()) c.static_dir = value.get<std::string>();
      } else if (key == "coref_window") {
        c.coref_window = value.get<std::size_t>();
      } else if (key == "threads") {
        c.threads = value.get<std::size_t>();
      } else if (key == "max_document_bytes") {
        c.corpus.max_document_bytes = value.get<std::size_t>();
      } else if (key == "control_chars") {
        const auto policy = value.get<std::string>();
        if (policy == "strip") {
          c.corpus.control_chars = ControlCharPolicy::Strip;
        } else if (policy == "reject") {
          c.corpus.control_chars = ControlCharPolicy::Reject;
        } else {
          throw Error("bad_config", "control_chars must be strip or reject");
        }
      } else if (key == "prune") {
        for (const auto& [rule, on] : value.items()) {
          const bool flag = on.get<bool>();
          if (rule == "R1") c.prune.subject_relation = flag;
          else if (rule == "R2") c.prune.subject_object = flag;
          else if (rule == "R3") c.prune.relation_object = flag;
          else if (rule == "R4") c.prune.crossover = flag;
          else throw Error("bad_config", "unknown prune rule " + rule);
        }
      } else {
        throw Error("bad_config", "unknown config key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw Error("bad_config", std::string("config value has the wrong type: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Error("bad_config", "port out of range");
  return c;
}

namespace {

bool parse_flag(const std::string& name, const std::string& value) {
  if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "off" || value == "no") return false;
  throw Error("bad_config", name + " must be a boolean, got " + value);
}

std::size_t parse_count(const std::string& name, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw Error("bad_config", name + " must be a non-negative integer, got " + value);
  }
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void apply_env_overrides(PipelineConfig& c) {
  if (auto v = env("CONCEPTMAP_HOST")) c.host = *v;
  if (auto v = env("CONCEPTMAP_PORT")) {
    const auto port = parse_count("CONCEPTMAP_PORT", *v);
    if (port > 65535) throw Error("bad_config", "CONCEPTMAP_PORT out of range");
    c.port = static_cast<int>(port);
  }
  if (auto v = env("CONCEPTMAP_STORE")) c.store_dir = *v;
  if (auto v = env("CONCEPTMAP_GAZETTEER_DIR")) c.gazetteer_dir = *v;
  if (auto v = env("CONCEPTMAP_STATIC_DIR")) c.static_dir = fs::path(*v);
  if (auto v = env("CONCEPTMAP_COREF_WINDOW")) c.coref_window = parse_count("CONCEPTMAP_COREF_WINDOW", *v);
  if (auto v = env("CONCEPTMAP_THREADS")) c.threads = parse_count("CONCEPTMAP_THREADS", *v);
  if (auto v = env("CONCEPTMAP_PRUNE_R1")) c.prune.subject_relation = parse_flag("CONCEPTMAP_PRUNE_R1", *v);
  if (auto v = env("CONCEPTMAP_PRUNE_R2")) c.prune.subject_object = parse_flag("CONCEPTMAP_PRUNE_R2", *v);
  if (auto v = env("CONCEPTMAP_PRUNE_R3")) c.prune.relation_object = parse_flag("CONCEPTMAP_PRUNE_R3", *v);
  if (auto v = env("CONCEPTMAP_PRUNE_R4")) c.prune.crossover = parse_flag("CONCEPTMAP_PRUNE_R4", *v);
}

PipelineConfig load_config(const std::optional<fs::path>& path) {
  PipelineConfig c;
  if (path) {
    const std::string content = read_text_file(*path);
    json j;
    try {
      j = json::parse(content);
    } catch (const json::parse_error& e) {
      throw Error("bad_config", path->string() + ": " + e.what());
    }
    c = PipelineConfig::from_json(j);
  }
  apply_env_overrides(c);
  return c;
}

std::unique_ptr<RuleBasedExtractor> make_extractor(const PipelineConfig& config) {
  auto lexicon = std::make_shared<const Lexicon>(Lexicon::load(config.resolved_gazetteer_dir()));
  const fs::path abbreviations = config.resolved_abbreviations_file();
  SentenceSplitter splitter =
      fs::exists(abbreviations) ? SentenceSplitter::from_file(abbreviations) : SentenceSplitter();
  ExtractorOptions options;
  options.coref_window = config.coref_window;
  return std::make_unique<RuleBasedExtractor>(std::move(lexicon), std::move(splitter), options);
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Pending: return "PENDING";
    case RunStatus::Running: return "RUNNING";
    case RunStatus::Done: return "DONE";
    case RunStatus::Failed: break;
  }
  return "FAILED";
}

json PipelineRun::to_json() const {
  json j;
  j["run_id"] = run_id;
  j["status"] = std::string(conceptmap::to_string(status));
  j["stage"] = stage;
  j["error"] = error.empty() ? json(nullptr) : json(error);
  j["counters"] = {{"documents", documents},     {"sentences", sentences},
                   {"mentions", mentions},       {"raw_triples", raw_triples},
                   {"pruned_triples", pruned_triples}, {"nodes", nodes},
                   {"edges", edges}};
  j["timings"] = json::array();
  for (const auto& t : timings) j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  return j;
}

PipelineRun PipelineRun::from_json(const json& j) {
  PipelineRun r;
  r.run_id = j.at("run_id").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  if (status == "PENDING") r.status = RunStatus::Pending;
  else if (status == "RUNNING") r.status = RunStatus::Running;
  else if (status == "DONE") r.status = RunStatus::Done;
  else r.status = RunStatus::Failed;
  r.stage = j.at("stage").get<std::string>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  const auto& c = j.at("counters");
  r.documents = c.at("documents").get<std::size_t>();
  r.sentences = c.at("sentences").get<std::size_t>();
  r.mentions = c.at("mentions").get<std::size_t>();
  r.raw_triples = c.at("raw_triples").get<std::size_t>();
  r.pruned_triples = c.at("pruned_triples").get<std::size_t>();
  r.nodes = c.at("nodes").get<std::size_t>();
  r.edges = c.at("edges").get<std::size_t>();
  for (const auto& t : j.at("timings")) {
    r.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
  }
  return r;
}

PipelineRun run_pipeline(const Corpus& corpus, const PipelineConfig& config, std::string run_id,
                         std::shared_ptr<PipelineArtifacts>* artifacts_out,
                         const std::function<void(const PipelineRun&)>& on_progress) {
  if (corpus.empty()) throw Error("empty_corpus", "pipeline needs at least one document");
  if (run_id.empty() || run_id.find_first_of("/\\.") != std::string::npos) {
    throw Error("bad_run_id", "run id must be a plain name: " + run_id);
  }

  PipelineRun run;
  run.run_id = std::move(run_id);
  run.documents = corpus.size();
  run.status = RunStatus::Running;
  auto artifacts = std::make_shared<PipelineArtifacts>();
  artifacts->run_id = run.run_id;

  auto stage = [&](const char* name, const std::function<void()>& body) {
    run.stage = name;
    if (on_progress) on_progress(run);
    const auto start = std::chrono::steady_clock::now();
    body();
    run.timings.push_back({name, seconds_since(start)});
  };

  const StorePaths store{config.store_dir};
  const fs::path staging = store.root / "runs" / (".staging-" + run.run_id);
  try {
    stage("extract", [&] {
      const auto extractor = make_extractor(config);
      auto extraction = extract_corpus(*extractor, corpus, config.threads);
      run.sentences = extraction.sentence_count;
      run.mentions = extraction.mention_count;
      artifacts->raw = std::move(extraction.triples);
      run.raw_triples = artifacts->raw.size();
    });
    stage("prune", [&] {
      auto result = prune(artifacts->raw, config.prune);
      artifacts->pruned = std::move(result.survivors);
      artifacts->report = std::move(result.report);
      run.pruned_triples = artifacts->pruned.size();
    });
    stage("build", [&] {
      artifacts->graph = build_graph(artifacts->pruned, corpus);
      run.nodes = artifacts->graph.node_count();
      run.edges = artifacts->graph.edge_count();
    });
    stage("persist", [&] {
      // Everything goes to a staging directory first; the run directory
      // and the top-level graph only appear once all files are complete.
      fs::remove_all(staging);
      fs::create_directories(staging);
      const std::string graph_bytes = serialize_graph(artifacts->graph);
      write_triples(staging / "raw.jsonl", artifacts->raw);
      write_triples(staging / "pruned.jsonl", artifacts->pruned);
      write_file_atomic(staging / "report.json", artifacts->report.to_json().dump(2) + "\n");
      write_file_atomic(staging / "graph.spg", graph_bytes);
      PipelineRun done = run;
      done.status = RunStatus::Done;
      write_file_atomic(staging / "run.json", done.to_json().dump(2) + "\n");
      const fs::path final_dir = store.run_dir(run.run_id);
      fs::remove_all(final_dir);
      fs::rename(staging, final_dir);
      write_file_atomic(store.graph(), graph_bytes);
      write_file_atomic(store.current(), run.run_id + "\n");
    });
  } catch (const std::exception& e) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    run.status = RunStatus::Failed;
    run.error = e.what();
    if (on_progress) on_progress(run);
    return run;
  }
  run.status = RunStatus::Done;
  if (artifacts_out) *artifacts_out = std::move(artifacts);
  if (on_progress) on_progress(run);
  return run;
}

std::shared_ptr<PipelineArtifacts> load_current(const fs::path& store_dir) {
  const StorePaths store{store_dir};
  if (!fs::exists(store.current())) {
    if (fs::exists(store.graph())) {
      auto a = std::make_shared<PipelineArtifacts>();
      a->graph = load_graph(store.graph());
      return a;
    }
    return nullptr;
  }
  auto a = std::make_shared<PipelineArtifacts>();
  a->run_id = std::string(text::trim(read_text_file(store.current())));
  const fs::path dir = store.run_dir(a->run_id);
  a->graph = load_graph(store.graph());
  a->raw = import_triples(dir / "raw.jsonl");
  a->pruned = import_triples(dir / "pruned.jsonl");
  return a;
}

}  // namespace conceptmap
