#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conceptmap/corpus.hpp"
#include "conceptmap/dominate.hpp"
#include "conceptmap/extract.hpp"
#include "conceptmap/graph.hpp"

namespace conceptmap {

inline constexpr std::string_view kVersion = "0.3.0";

struct PipelineConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store_dir = "conceptmap-store";
  std::filesystem::path gazetteer_dir;      // empty: <data dir>/gazetteers
  std::filesystem::path abbreviations_file; // empty: <data dir>/abbreviations.txt
  std::optional<std::filesystem::path> static_dir;
  std::size_t coref_window = 2;
  std::size_t threads = 1;
  PruneOptions prune;
  CorpusOptions corpus;

  std::filesystem::path resolved_gazetteer_dir() const;
  std::filesystem::path resolved_abbreviations_file() const;

  nlohmann::json to_json() const;
  /// Unknown keys are rejected so that typos surface. Throws Error("bad_config").
  static PipelineConfig from_json(const nlohmann::json& j);
};

/// Reads a JSON config file (defaults when `path` is empty) and applies the
/// CONCEPTMAP_* environment overrides.
PipelineConfig load_config(const std::optional<std::filesystem::path>& path);
/// CONCEPTMAP_HOST, CONCEPTMAP_PORT, CONCEPTMAP_STORE, CONCEPTMAP_GAZETTEER_DIR,
/// CONCEPTMAP_STATIC_DIR, CONCEPTMAP_COREF_WINDOW, CONCEPTMAP_THREADS,
/// CONCEPTMAP_PRUNE_R1 .. CONCEPTMAP_PRUNE_R4.
void apply_env_overrides(PipelineConfig& config);

/// Builds the rule-based extractor described by `config`.
std::unique_ptr<RuleBasedExtractor> make_extractor(const PipelineConfig& config);

enum class RunStatus { Pending, Running, Done, Failed };
std::string_view to_string(RunStatus s);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineRun {
  std::string run_id;
  RunStatus status = RunStatus::Pending;
  std::string stage;  // current stage, or the failing one
  std::string error;
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t mentions = 0;
  std::size_t raw_triples = 0;
  std::size_t pruned_triples = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::vector<StageTiming> timings;

  nlohmann::json to_json() const;
  static PipelineRun from_json(const nlohmann::json& j);
};

/// In-memory results of a completed run.
struct PipelineArtifacts {
  std::string run_id;
  std::vector<Triple> raw;
  std::vector<Triple> pruned;
  PruneReport report;
  ConceptGraph graph;
};

/// Store layout: graph.spg (latest graph), CURRENT (latest run id) and
/// runs/<id>/{raw.jsonl, pruned.jsonl, report.json, graph.spg, run.json}.
struct StorePaths {
  std::filesystem::path root;

  std::filesystem::path graph() const { return root / "graph.spg"; }
  std::filesystem::path current() const { return root / "CURRENT"; }
  std::filesystem::path run_dir(std::string_view id) const { return root / "runs" / std::string(id); }
};

/// Runs extract -> prune -> build -> persist. Throws Error("empty_corpus")
/// before any stage when the corpus is empty. A failing stage yields a
/// FAILED run naming the stage; nothing from that run is persisted.
/// `on_progress` sees the record at every stage transition.
PipelineRun run_pipeline(const Corpus& corpus, const PipelineConfig& config, std::string run_id,
                         std::shared_ptr<PipelineArtifacts>* artifacts = nullptr,
                         const std::function<void(const PipelineRun&)>& on_progress = {});

/// Loads the artifacts of the run named in CURRENT, or nullptr when the
/// store holds none. Throws when present files are corrupt.
std::shared_ptr<PipelineArtifacts> load_current(const std::filesystem::path& store_dir);

}  // namespace conceptmap
