// Python bindings. Structured results cross the boundary as JSON text that
// the Python side decodes, so every dict has the same shape as the HTTP API.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "conceptmap/analytics.hpp"
#include "conceptmap/dominate.hpp"
#include "conceptmap/pipeline.hpp"
#include "conceptmap/triple_io.hpp"

namespace py = pybind11;
using namespace conceptmap;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  // Leaked on purpose: destroying it after interpreter shutdown would crash.
  static py::handle loads = py::module_::import("json").attr("loads").cast<py::object>().release();
  return loads(j.dump());
}

json from_py(const py::handle& obj) {
  static py::handle dumps = py::module_::import("json").attr("dumps").cast<py::object>().release();
  return json::parse(dumps(obj).cast<std::string>());
}

std::vector<Triple> triples_from_py(const py::iterable& items) {
  std::vector<Triple> out;
  for (const auto& item : items) out.push_back(triple_from_json(from_py(item)));
  return out;
}

py::list triples_to_py(const std::vector<Triple>& triples) {
  py::list out;
  for (const auto& t : triples) out.append(to_py(triple_to_json(t)));
  return out;
}

NodeId node_by_name(const ConceptGraph& g, const std::string& name) {
  if (auto id = g.find_node(name)) return *id;
  throw Error("unknown_node", "unknown node: " + name);
}

}  // namespace

PYBIND11_MODULE(_conceptmap, m) {
  m.attr("__version__") = std::string(kVersion);

  // Owned for the life of the interpreter; the module attribute holds another reference.
  static PyObject* error_type =
      py::exception<Error>(m, "ConceptmapError", PyExc_RuntimeError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("kind") = e.kind();
      PyErr_SetObject(error_type, instance.ptr());
    }
  });

  m.def("normalize_field", &normalize_field, py::arg("field"));

  m.def(
      "extract",
      [](const std::string& corpus_jsonl, std::size_t coref_window) {
        PipelineConfig config;
        config.coref_window = coref_window;
        const Corpus corpus = parse_jsonl_corpus(corpus_jsonl, "corpus");
        const auto extractor = make_extractor(config);
        std::vector<Triple> triples;
        {
          py::gil_scoped_release release;
          triples = extract_corpus(*extractor, corpus).triples;
        }
        return triples_to_py(triples);
      },
      py::arg("corpus_jsonl"), py::arg("coref_window") = 2,
      "Extract triples from a JSONL corpus; returns a list of triple dicts.");

  m.def(
      "prune",
      [](const py::iterable& triples, bool r1, bool r2, bool r3, bool r4) {
        PruneOptions o{r1, r2, r3, r4};
        const PruneResult r = prune(triples_from_py(triples), o);
        py::dict out;
        out["survivors"] = triples_to_py(r.survivors);
        out["report"] = to_py(r.report.to_json());
        return out;
      },
      py::arg("triples"), py::arg("r1") = true, py::arg("r2") = true, py::arg("r3") = true,
      py::arg("r4") = true);

  py::class_<ConceptGraph>(m, "Graph")
      .def_static("load", &load_graph, py::arg("path"))
      .def_static(
          "from_bytes", [](const py::bytes& b) { return deserialize_graph(std::string(b)); },
          py::arg("data"))
      .def_static(
          "build",
          [](const py::iterable& triples, const std::string& corpus_jsonl) {
            return build_graph(triples_from_py(triples), parse_jsonl_corpus(corpus_jsonl, "corpus"));
          },
          py::arg("triples"), py::arg("corpus_jsonl"))
      .def("save", &save_graph, py::arg("path"))
      .def("to_bytes", [](const ConceptGraph& g) { return py::bytes(serialize_graph(g)); })
      .def_property_readonly("node_count", &ConceptGraph::node_count)
      .def_property_readonly("edge_count", &ConceptGraph::edge_count)
      .def("find_node", &ConceptGraph::find_node, py::arg("name"))
      .def("to_json", [](const ConceptGraph& g) { return to_py(export_json(g)); })
      .def("to_graphml", &export_graphml)
      .def(
          "shortest_path",
          [](const ConceptGraph& g, const std::string& source, const std::string& target,
             bool directed) {
            return to_py(path_to_json(
                g, shortest_path(g, node_by_name(g, source), node_by_name(g, target), directed)));
          },
          py::arg("source"), py::arg("target"), py::arg("directed") = false)
      .def(
          "closeness",
          [](const ConceptGraph& g, std::size_t top) {
            return to_py(centrality_to_json(g, closeness_centrality(g), top));
          },
          py::arg("top") = 0)
      .def(
          "query",
          [](const ConceptGraph& g, const std::string& relation) {
            return to_py(export_json(g, query_relations(g, relation)));
          },
          py::arg("relation"))
      .def(
          "neighborhood",
          [](const ConceptGraph& g, const std::string& name, std::size_t radius) {
            return to_py(export_json(g, neighborhood(g, node_by_name(g, name), radius)));
          },
          py::arg("name"), py::arg("radius") = 1)
      .def("__eq__", [](const ConceptGraph& a, const ConceptGraph& b) { return a == b; });

  m.def(
      "run_pipeline",
      [](const std::string& corpus_jsonl, const std::filesystem::path& store_dir,
         const std::string& run_id, const py::object& config) {
        PipelineConfig c = config.is_none() ? PipelineConfig{}
                                            : PipelineConfig::from_json(from_py(config));
        c.store_dir = store_dir;
        const Corpus corpus = parse_jsonl_corpus(corpus_jsonl, "corpus");
        PipelineRun run;
        {
          py::gil_scoped_release release;
          run = run_pipeline(corpus, c, run_id);
        }
        return to_py(run.to_json());
      },
      py::arg("corpus_jsonl"), py::arg("store_dir"), py::arg("run_id") = "py",
      py::arg("config") = py::none());
}
