// Command-line front end: one subcommand per pipeline stage plus the server.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "conceptmap/analytics.hpp"
#include "conceptmap/corpus.hpp"
#include "conceptmap/dominate.hpp"
#include "conceptmap/graph.hpp"
#include "conceptmap/pipeline.hpp"
#include "conceptmap/service.hpp"
#include "conceptmap/synth.hpp"
#include "conceptmap/triple_io.hpp"

namespace fs = std::filesystem;
using namespace conceptmap;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void write_output(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file_atomic(out, content);
  }
}

Corpus read_corpus(const std::string& path, const CorpusOptions& options) {
  return parse_jsonl_corpus(read_text_file(path), path, options);
}

fs::path graph_path(const std::string& flag, const PipelineConfig& config) {
  return flag.empty() ? StorePaths{config.store_dir}.graph() : fs::path(flag);
}

NodeId resolve_node(const ConceptGraph& graph, const std::string& name) {
  if (auto id = graph.find_node(name)) return *id;
  throw Error("unknown_node", "unknown node: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conceptmap: build and explore concept maps from report collections"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON configuration file")->check(CLI::ExistingFile);
  app.set_version_flag("--version", std::string(kVersion));

  PipelineConfig config;
  auto load = [&] {
    config = load_config(config_file.empty() ? std::nullopt
                                             : std::optional<fs::path>(config_file));
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load plain-text files or JSONL into a corpus file");
  std::string ingest_path;
  std::string ingest_format = "plain";
  std::string ingest_out;
  ingest->add_option("path", ingest_path, "File or directory")->required();
  ingest->add_option("--format", ingest_format, "plain|jsonl")
      ->check(CLI::IsMember({"plain", "plain_dir", "jsonl"}));
  ingest->add_option("--out", ingest_out, "Corpus JSONL output (default stdout)");
  ingest->callback([&] {
    load();
    const Corpus corpus =
        conceptmap::ingest_path(ingest_path, *parse_corpus_format(ingest_format), config.corpus);
    write_output(ingest_out, corpus.to_jsonl());
    std::cerr << "ingested " << corpus.size() << " documents\n";
  });

  // extract
  auto* extract = app.add_subcommand("extract", "Extract relation triples from a corpus");
  std::string extract_corpus_file;
  std::string extract_import;
  std::string extract_out;
  extract->add_option("--corpus", extract_corpus_file, "Corpus JSONL")->required();
  extract->add_option("--import", extract_import, "Use externally produced triples instead");
  extract->add_option("--out", extract_out, "Triples JSONL output")->required();
  extract->callback([&] {
    load();
    const Corpus corpus = read_corpus(extract_corpus_file, config.corpus);
    std::vector<Triple> triples;
    if (!extract_import.empty()) {
      triples = import_triples(extract_import);
      for (const auto& t : triples) {
        if (!corpus.find(t.key.doc_id)) {
          throw Error("unknown_document", "imported triple " + to_string(t.key) +
                                              " references a document not in the corpus");
        }
      }
    } else {
      const auto extractor = make_extractor(config);
      auto result = extract_corpus(*extractor, corpus, config.threads);
      std::cerr << result.sentence_count << " sentences, " << result.mention_count
                << " mentions\n";
      triples = std::move(result.triples);
    }
    write_triples(extract_out, triples);
    std::cerr << triples.size() << " triples\n";
  });

  // prune
  auto* prune_cmd = app.add_subcommand("prune", "Remove dominated triples");
  std::string prune_in;
  std::string prune_out;
  std::string prune_report;
  prune_cmd->add_option("--in", prune_in, "Triples JSONL input")->required();
  prune_cmd->add_option("--out", prune_out, "Surviving triples JSONL")->required();
  prune_cmd->add_option("--report", prune_report, "PruneReport JSON output");
  prune_cmd->callback([&] {
    load();
    const auto result = prune(import_triples(prune_in), config.prune);
    write_triples(prune_out, result.survivors);
    if (!prune_report.empty()) {
      write_file_atomic(prune_report, result.report.to_json().dump(2) + "\n");
    }
    std::cerr << result.report.input_count << " -> " << result.report.output_count
              << " triples in " << result.report.passes << " passes\n";
  });

  // build
  auto* build = app.add_subcommand("build", "Build the graph file from pruned triples");
  std::string build_corpus;
  std::string build_triples;
  std::string build_out;
  build->add_option("--corpus", build_corpus, "Corpus JSONL")->required();
  build->add_option("--triples", build_triples, "Pruned triples JSONL")->required();
  build->add_option("--out", build_out, "Graph file (default: store graph)");
  build->callback([&] {
    load();
    const Corpus corpus = read_corpus(build_corpus, config.corpus);
    const ConceptGraph graph = build_graph(import_triples(build_triples), corpus);
    const fs::path out = graph_path(build_out, config);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_graph(graph, out);
    std::cerr << graph.node_count() << " nodes, " << graph.edge_count() << " edges -> "
              << out.string() << "\n";
  });

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the whole pipeline into the store");
  std::string run_corpus;
  std::string run_id = "cli";
  run_cmd->add_option("--corpus", run_corpus, "Corpus JSONL")->required();
  run_cmd->add_option("--run-id", run_id, "Run directory name");
  run_cmd->callback([&] {
    load();
    const PipelineRun run = run_pipeline(read_corpus(run_corpus, config.corpus), config, run_id);
    std::cout << run.to_json().dump(2) << "\n";
    if (run.status != RunStatus::Done) throw Error("pipeline_failed", run.error);
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Start the HTTP API");
  std::optional<int> serve_port;
  serve->add_option("--port", serve_port, "Override the configured port");
  serve->callback([&] {
    load();
    if (serve_port) config.port = *serve_port;
    Service service(config);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const int port = service.start();
    std::cerr << "listening on http://" << config.host << ":" << port << "\n";
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });

  // export
  auto* export_cmd = app.add_subcommand("export", "Export the graph as JSON or GraphML");
  std::string export_graph;
  std::string export_format = "json";
  std::string export_out;
  export_cmd->add_option("--graph", export_graph, "Graph file (default: store graph)");
  export_cmd->add_option("--format", export_format, "json|graphml")
      ->check(CLI::IsMember({"json", "graphml"}));
  export_cmd->add_option("--out", export_out, "Output file (default stdout)");
  export_cmd->callback([&] {
    load();
    const ConceptGraph graph = load_graph(graph_path(export_graph, config));
    write_output(export_out, export_format == "json" ? export_json(graph).dump(2) + "\n"
                                                     : export_graphml(graph));
  });

  // path
  auto* path_cmd = app.add_subcommand("path", "Shortest path between two named nodes");
  std::string path_source;
  std::string path_target;
  std::string path_graph;
  bool path_directed = false;
  path_cmd->add_option("source", path_source)->required();
  path_cmd->add_option("target", path_target)->required();
  path_cmd->add_option("--graph", path_graph, "Graph file (default: store graph)");
  path_cmd->add_flag("--directed", path_directed, "Follow edge direction");
  path_cmd->callback([&] {
    load();
    const ConceptGraph graph = load_graph(graph_path(path_graph, config));
    const PathResult path = shortest_path(graph, resolve_node(graph, path_source),
                                          resolve_node(graph, path_target), path_directed);
    if (!path.found()) {
      std::cout << "no path\n";
      return;
    }
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
      std::cout << graph.node(path.nodes[i]).display_name << "\n";
      if (i < path.edges.size()) {
        const Edge& e = graph.edge(path.edges[i]);
        std::cout << "  " << (e.source == path.nodes[i] ? "-[" : "<-[") << e.relation_label
                  << (e.source == path.nodes[i] ? "]->" : "]-") << "\n";
      }
    }
    std::cout << "cost " << path.total_cost << "\n";
  });

  // centrality
  auto* centrality = app.add_subcommand("centrality", "Rank nodes by closeness centrality");
  std::size_t top = 10;
  std::string centrality_graph;
  centrality->add_option("--top", top, "Rows to print (0 = all)");
  centrality->add_option("--graph", centrality_graph, "Graph file (default: store graph)");
  centrality->callback([&] {
    load();
    const ConceptGraph graph = load_graph(graph_path(centrality_graph, config));
    for (const auto& entry : closeness_centrality(graph).ranking(top)) {
      std::printf("%.6f  %s\n", entry.score, graph.node(entry.node).display_name.c_str());
    }
  });

  // query
  auto* query = app.add_subcommand("query", "Edges whose relation matches the query");
  std::string query_text;
  std::string query_graph;
  query->add_option("relation", query_text)->required();
  query->add_option("--graph", query_graph, "Graph file (default: store graph)");
  query->callback([&] {
    load();
    const ConceptGraph graph = load_graph(graph_path(query_graph, config));
    const Subgraph sub = query_relations(graph, query_text);
    for (EdgeId id : sub.edges) {
      const Edge& e = graph.edge(id);
      std::cout << graph.node(e.source).display_name << " -[" << e.relation_label << "]-> "
                << graph.node(e.target).display_name << "\n";
    }
    std::cerr << sub.edges.size() << " edges\n";
  });

  // generate
  auto* generate = app.add_subcommand("generate", "Write synthetic test data");
  std::string generate_kind;
  std::string generate_out;
  std::size_t generate_count = 0;
  std::uint64_t generate_seed = 0;
  generate->add_option("kind", generate_kind, "corpus|stress")
      ->required()
      ->check(CLI::IsMember({"corpus", "stress"}));
  generate->add_option("--count", generate_count, "Documents or records");
  generate->add_option("--seed", generate_seed, "Generator seed");
  generate->add_option("--out", generate_out, "Output file (default stdout)");
  generate->callback([&] {
    if (generate_kind == "corpus") {
      const auto corpus = synth::generate_corpus(generate_count ? generate_count : 1000,
                                                 generate_seed);
      write_output(generate_out, corpus.to_jsonl());
    } else {
      const auto triples =
          synth::generate_stress_triples(generate_count ? generate_count : synth::kStressRecords,
                                         generate_seed ? generate_seed : synth::kStressSeed);
      write_output(generate_out, triples_to_jsonl(triples));
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
