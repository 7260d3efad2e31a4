#include "conceptmap/service.hpp"

#include <atomic>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "conceptmap/analytics.hpp"
#include "conceptmap/triple_io.hpp"

namespace conceptmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxUploadBytes = 64u << 20;
constexpr std::size_t kDefaultTriplePage = 100;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message, json detail = json::object()) {
  send_json(res, status, {{"code", code}, {"message", message}, {"detail", std::move(detail)}});
}

int status_for(const std::string& kind) {
  if (kind == "unknown_node" || kind == "not_found") return 404;
  if (kind == "busy") return 409;
  return 400;
}

std::optional<std::size_t> size_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used == v.size() && n >= 0) return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
  }
  throw Error("bad_parameter", name + " must be a non-negative integer");
}

bool bool_param(const httplib::Request& req, const std::string& name) {
  if (!req.has_param(name)) return false;
  const std::string v = req.get_param_value(name);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v.empty() || v == "0" || v == "false" || v == "no") return false;
  throw Error("bad_parameter", name + " must be true or false");
}

}  // namespace

struct Service::Impl {
  PipelineConfig config;
  httplib::Server server;
  std::thread listener;
  int bound_port = 0;

  std::mutex mutex;  // guards everything below
  std::shared_ptr<const PipelineArtifacts> snapshot;
  std::vector<Document> staged;
  std::map<std::string, PipelineRun> runs;
  std::size_t next_run = 1;
  bool run_active = false;
  std::thread worker;

  explicit Impl(PipelineConfig c) : config(std::move(c)) {
    auto current = load_current(config.store_dir);
    snapshot = current ? std::move(current) : std::make_shared<const PipelineArtifacts>();
    if (!snapshot->run_id.empty()) {
      const fs::path run_file = StorePaths{config.store_dir}.run_dir(snapshot->run_id) / "run.json";
      if (fs::exists(run_file)) {
        runs[snapshot->run_id] = PipelineRun::from_json(json::parse(read_text_file(run_file)));
        next_run = runs.size() + 1;
      }
    }
    routes();
  }

  std::shared_ptr<const PipelineArtifacts> current() {
    std::lock_guard lock(mutex);
    return snapshot;
  }

  NodeId resolve(const ConceptGraph& graph, const httplib::Request& req, const std::string& param) {
    if (!req.has_param(param)) throw Error("bad_parameter", "missing parameter " + param);
    const std::string name = req.get_param_value(param);
    if (auto id = graph.find_node(name)) return *id;
    throw Error("unknown_node", "unknown node: " + name);
  }

  void routes() {
    server.set_payload_max_length(kMaxUploadBytes);
    // SO_REUSEADDR only: the library default also sets SO_REUSEPORT, which
    // would let a second instance silently share the port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });

    server.set_exception_handler([](const httplib::Request& req, httplib::Response& res,
                                    std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        json detail = json::object();
        if (e.kind() == "unknown_node") {
          for (const char* p : {"source", "target"}) {
            if (!req.has_param(p)) continue;
            const std::string v = req.get_param_value(p);
            if (std::string(e.what()).find(v) != std::string::npos) detail["name"] = v;
          }
        }
        send_error(res, status_for(e.kind()), e.kind(), e.what(), detail);
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      send_error(res, res.status, res.status == 404 ? "not_found" : "http_error",
                 "no route for " + req.method + " " + req.path, json::object());
      return httplib::Server::HandlerResponse::Handled;
    });

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex);
      json run = nullptr;
      if (!runs.empty()) {
        const auto& latest = std::prev(runs.end())->second;
        run = {{"run_id", latest.run_id}, {"status", std::string(to_string(latest.status))}};
      }
      send_json(res, 200,
                {{"status", "ok"},
                 {"version", std::string(kVersion)},
                 {"run", run},
                 {"active_run", run_active},
                 {"staged_documents", staged.size()},
                 {"graph", {{"nodes", snapshot->graph.node_count()},
                            {"edges", snapshot->graph.edge_count()}}}});
    });

    server.Post("/api/documents", [this](const httplib::Request& req, httplib::Response& res) {
      std::vector<Document> incoming;
      if (req.is_multipart_form_data()) {
        for (const auto& [field, part] : req.files) {
          const std::string origin = part.filename.empty() ? field : part.filename;
          if (origin.size() >= 6 && origin.compare(origin.size() - 6, 6, ".jsonl") == 0) {
            const Corpus batch = parse_jsonl_corpus(part.content, origin, config.corpus);
            incoming.insert(incoming.end(), batch.documents().begin(), batch.documents().end());
          } else {
            Document d;
            d.doc_id = origin;
            d.title = fs::path(origin).stem().string();
            d.body = sanitize_body(part.content, origin, config.corpus);
            incoming.push_back(std::move(d));
          }
        }
      } else {
        const Corpus batch = parse_jsonl_corpus(req.body, "upload", config.corpus);
        incoming.insert(incoming.end(), batch.documents().begin(), batch.documents().end());
      }
      if (incoming.empty()) throw Error("empty_upload", "upload contains no documents");
      std::lock_guard lock(mutex);
      std::vector<Document> merged = staged;
      merged.insert(merged.end(), incoming.begin(), incoming.end());
      Corpus check(merged);  // throws on duplicate ids
      staged = std::move(merged);
      send_json(res, 201, {{"added", incoming.size()}, {"staged", staged.size()}});
    });

    server.Post("/api/pipeline/run", [this](const httplib::Request&, httplib::Response& res) {
      std::unique_lock lock(mutex);
      if (run_active) {
        send_error(res, 409, "busy", "a pipeline run is already active");
        return;
      }
      if (staged.empty()) throw Error("empty_corpus", "no documents staged");
      Corpus corpus(staged);
      char id[32];
      std::snprintf(id, sizeof id, "run-%04zu", next_run++);
      PipelineRun pending;
      pending.run_id = id;
      pending.documents = corpus.size();
      runs[pending.run_id] = pending;
      run_active = true;
      if (worker.joinable()) worker.join();
      worker = std::thread([this, corpus = std::move(corpus), run_id = pending.run_id] {
        std::shared_ptr<PipelineArtifacts> artifacts;
        PipelineRun done;
        try {
          done = run_pipeline(corpus, config, run_id, &artifacts, [&](const PipelineRun& r) {
            std::lock_guard progress_lock(mutex);
            runs[r.run_id] = r;
          });
        } catch (const std::exception& e) {
          done.run_id = run_id;
          done.status = RunStatus::Failed;
          done.error = e.what();
        }
        std::lock_guard done_lock(mutex);
        runs[run_id] = done;
        if (done.status == RunStatus::Done && artifacts) snapshot = std::move(artifacts);
        run_active = false;
      });
      res.set_header("Location", "/api/runs/" + pending.run_id);
      send_json(res, 202, pending.to_json());
    });

    server.Get(R"(/api/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex);
      auto it = runs.find(req.matches[1]);
      if (it == runs.end()) throw Error("not_found", "unknown run " + std::string(req.matches[1]));
      send_json(res, 200, it->second.to_json());
    });

    server.Get(R"(/api/runs/([^/]+)/report)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 {
                   std::lock_guard lock(mutex);
                   auto it = runs.find(id);
                   if (it == runs.end()) throw Error("not_found", "unknown run " + id);
                   if (it->second.status != RunStatus::Done) {
                     throw Error("not_found", "run " + id + " has no report");
                   }
                 }
                 const fs::path file = StorePaths{config.store_dir}.run_dir(id) / "report.json";
                 res.status = 200;
                 res.set_content(read_text_file(file), "application/json");
               });

    server.Get("/api/graph", [this](const httplib::Request& req, httplib::Response& res) {
      const auto snap = current();
      const ConceptGraph& g = snap->graph;
      const std::size_t offset = size_param(req, "offset").value_or(0);
      const std::size_t limit = size_param(req, "limit").value_or(g.node_count());
      Subgraph view;
      const std::size_t end = std::min(g.node_count(), offset + std::min(limit, g.node_count()));
      for (NodeId n = std::min(offset, end); n < end; ++n) view.nodes.push_back(n);
      const auto in_page = [&](NodeId n) { return n >= offset && n < end; };
      for (const Edge& e : g.edges()) {
        if (in_page(e.source) && in_page(e.target)) view.edges.push_back(e.id);
      }
      json body = export_json(g, view);
      body["page"] = {{"offset", offset}, {"limit", limit}, {"total_nodes", g.node_count()},
                      {"total_edges", g.edge_count()}};
      send_json(res, 200, body);
    });

    server.Get("/api/graph/path", [this](const httplib::Request& req, httplib::Response& res) {
      const auto snap = current();
      const NodeId source = resolve(snap->graph, req, "source");
      const NodeId target = resolve(snap->graph, req, "target");
      const bool directed = bool_param(req, "directed");
      const PathResult path = shortest_path(snap->graph, source, target, directed);
      json body = path_to_json(snap->graph, path);
      body["directed"] = directed;
      send_json(res, 200, body);
    });

    server.Get("/api/graph/centrality", [this](const httplib::Request& req, httplib::Response& res) {
      const auto snap = current();
      const std::size_t top = size_param(req, "top").value_or(0);
      send_json(res, 200,
                centrality_to_json(snap->graph, closeness_centrality(snap->graph), top));
    });

    server.Get("/api/graph/query", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("relation")) throw Error("bad_parameter", "missing parameter relation");
      const auto snap = current();
      const Subgraph sub = query_relations(snap->graph, req.get_param_value("relation"));
      send_json(res, 200, export_json(snap->graph, sub));
    });

    server.Get("/api/triples", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string stage = req.has_param("stage") ? req.get_param_value("stage") : "pruned";
      if (stage != "raw" && stage != "pruned") {
        throw Error("bad_parameter", "stage must be raw or pruned");
      }
      const auto snap = current();
      const auto& triples = stage == "raw" ? snap->raw : snap->pruned;
      const std::size_t offset = std::min(size_param(req, "offset").value_or(0), triples.size());
      const std::size_t limit = size_param(req, "limit").value_or(kDefaultTriplePage);
      const std::size_t end = std::min(triples.size(), offset + std::min(limit, triples.size()));
      json page = json::array();
      for (std::size_t i = offset; i < end; ++i) page.push_back(triple_to_json(triples[i]));
      send_json(res, 200,
                {{"stage", stage}, {"total", triples.size()}, {"offset", offset},
                 {"limit", limit}, {"run_id", snap->run_id}, {"triples", page}});
    });

    if (config.static_dir && fs::is_directory(*config.static_dir)) {
      server.set_mount_point("/", config.static_dir->string());
    }
  }
};

Service::Service(PipelineConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::start() {
  const auto& c = impl_->config;
  int port = c.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error("bind_failure", "cannot bind " + c.host);
  } else if (!impl_->server.bind_to_port(c.host, port)) {
    throw Error("bind_failure", "cannot bind " + c.host + ":" + std::to_string(port));
  }
  impl_->bound_port = port;
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::wait() {
  if (impl_->listener.joinable()) impl_->listener.join();
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int Service::port() const { return impl_->bound_port; }

const PipelineConfig& Service::config() const { return impl_->config; }

}  // namespace conceptmap
