// Python bindings for the core operations: graph loading, the end-to-end
// embedding pipeline, the dense reference routines, the truncated SVD, and
// the classification metrics.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <tuple>
#include <vector>

#include "sparsene/classify.hpp"
#include "sparsene/errors.hpp"
#include "sparsene/graph.hpp"
#include "sparsene/oracle.hpp"
#include "sparsene/sparse.hpp"
#include "sparsene/sparsifier.hpp"
#include "sparsene/svd.hpp"

namespace py = pybind11;
using namespace sparsene;

namespace {

py::array_t<double> to_numpy(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::memcpy(out.mutable_data(), m.data(), sizeof(double) * m.rows() * m.cols());
  return out;
}

py::array_t<double> to_numpy(const DenseSymmetric& m) {
  const std::size_t n = m.n();
  py::array_t<double> out({n, n});
  std::memcpy(out.mutable_data(), m.values().data(), sizeof(double) * n * n);
  return out;
}

using CArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseSymmetric to_symmetric(const CArray& a, const char* what) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1))
    throw ParamError(std::string(what) + " must be a square 2-d array");
  const auto n = static_cast<VertexId>(a.shape(0));
  const auto view = a.unchecked<2>();
  double scale = 0.0;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = 0; j < n; ++j) scale = std::max(scale, std::abs(view(i, j)));
  DenseSymmetric out(n);
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i; j < n; ++j) {
      if (std::abs(view(i, j) - view(j, i)) > 1e-9 * std::max(scale, 1.0))
        throw ParamError(std::string(what) + " is not symmetric");
      out.set(i, j, view(i, j));
    }
  }
  return out;
}

SparseMatrix to_sparse_symmetric(const CArray& a, const char* what) {
  const DenseSymmetric sym = to_symmetric(a, what);
  std::vector<Triplet> trips;
  for (VertexId i = 0; i < sym.n(); ++i) {
    for (VertexId j = 0; j < sym.n(); ++j) {
      const double v = sym(i, j);
      if (v != 0.0) trips.push_back({i, j, v});
    }
  }
  return SparseMatrix::from_triplets(sym.n(), trips, true);
}

Graph graph_from_edges(const py::sequence& edges, VertexId n, bool weighted) {
  std::vector<Edge> parsed;
  parsed.reserve(py::len(edges));
  for (const auto& item : edges) {
    const auto tup = py::cast<py::sequence>(item);
    if (py::len(tup) != 2 && py::len(tup) != 3)
      throw ParamError("each edge must be (u, v) or (u, v, weight)");
    Edge e;
    e.u = py::cast<VertexId>(tup[0]);
    e.v = py::cast<VertexId>(tup[1]);
    e.w = py::len(tup) == 3 ? py::cast<double>(tup[2]) : 1.0;
    parsed.push_back(e);
  }
  return Graph::from_edges(parsed, n, weighted);
}

LabelTable to_label_table(const std::vector<std::vector<std::uint32_t>>& labels,
                          std::size_t n_rows) {
  if (labels.size() != n_rows)
    throw ParamError("labels must have one entry per embedding row");
  LabelTable table;
  table.labels = labels;
  std::uint32_t max_label = 0;
  bool any = false;
  for (auto& per_vertex : table.labels) {
    std::sort(per_vertex.begin(), per_vertex.end());
    per_vertex.erase(std::unique(per_vertex.begin(), per_vertex.end()),
                     per_vertex.end());
    for (const std::uint32_t l : per_vertex) {
      max_label = std::max(max_label, l);
      any = true;
    }
  }
  table.label_count = any ? max_label + 1 : 0;
  return table;
}

py::tuple embed_graph(const Graph& g, std::uint32_t window, std::uint64_t samples,
                      double multiplier, std::uint32_t dim, double negative,
                      std::uint64_t seed, std::uint32_t threads) {
  PipelineConfig cfg;
  cfg.window = window;
  cfg.samples = samples;
  cfg.multiplier = multiplier;
  if (cfg.samples == 0 && cfg.multiplier == 0.0) cfg.multiplier = 1000.0;
  cfg.dim = dim;
  cfg.negative = negative;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.weighted = g.weighted();
  cfg.validate();

  const std::uint64_t resolved = cfg.resolve_samples(g.edge_count());
  const SparsifierAccumulator acc = build_sparsifier(g, cfg);
  const SparseMatrix lap = laplacian_of(acc, g.n());
  const SparseMatrix ppmi = ppmi_sparsifier(g, lap, cfg.negative);
  const SvdFactors svd = randomized_svd(ppmi, cfg.dim, cfg.seed, cfg.threads);
  const DenseMatrix emb = embed(svd.u, svd.s);

  py::dict info;
  info["samples"] = resolved;
  info["pairs"] = acc.pair_count();
  info["dropped_self_loops"] = acc.dropped_self_loops();
  info["laplacian_nnz"] = lap.nnz();
  info["ppmi_nnz"] = ppmi.nnz();
  info["singular_values"] = svd.s;
  return py::make_tuple(to_numpy(emb), info);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Node embeddings via path-sampled spectral sparsification";
  m.attr("__version__") = "0.1.0";

  const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<IncomparableError>(m, "IncomparableError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());

  py::class_<Graph>(m, "Graph", "Undirected weighted graph with dense vertex ids")
      .def_static("from_edges", &graph_from_edges, py::arg("edges"), py::arg("n"),
                  py::arg("weighted") = false,
                  "Build a graph from (u, v) or (u, v, weight) tuples")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("volume", &Graph::volume)
      .def_property_readonly("weighted", &Graph::weighted)
      .def("degree", &Graph::degree, py::arg("vertex"))
      .def("raw_ids", [](const Graph& g) { return g.raw_ids(); },
           "Dense id -> raw input id")
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.n()) +
               ", m=" + std::to_string(g.edge_count()) + ")";
      });

  m.def("load_edge_list",
        [](const std::string& path, bool weighted) {
          return load_edge_list_file(path, weighted);
        },
        py::arg("path"), py::arg("weighted") = false,
        "Parse an edge list file ('u v' or 'u v weight' lines)");

  m.def("embed_graph", &embed_graph, py::arg("graph"), py::arg("window") = 10,
        py::arg("samples") = 0, py::arg("multiplier") = 0.0, py::arg("dim") = 128,
        py::arg("negative") = 1.0, py::arg("seed") = 1, py::arg("threads") = 1,
        "Full pipeline: path sampling -> sparse log-similarity matrix -> "
        "truncated SVD. Returns (embedding array, info dict).");

  m.def("exact_walk_matrix",
        [](const Graph& g, std::uint32_t window) {
          return to_numpy(exact_walk_matrix(g, window));
        },
        py::arg("graph"), py::arg("window"),
        "Dense reference co-visit matrix (desk scale only)");

  m.def("exact_ppmi_matrix",
        [](const Graph& g, std::uint32_t window, double negative) {
          return to_numpy(exact_ppmi_matrix(g, window, negative));
        },
        py::arg("graph"), py::arg("window"), py::arg("negative") = 1.0,
        "Dense reference log-similarity matrix (desk scale only)");

  m.def("measure_epsilon",
        [](const CArray& ltilde, const CArray& l) {
          return measure_epsilon(to_symmetric(ltilde, "ltilde"),
                                 to_symmetric(l, "l"));
        },
        py::arg("ltilde"), py::arg("l"),
        "Spectral approximation factor between two connected-graph "
        "Laplacians");

  m.def("truncated_svd",
        [](const CArray& a, std::uint32_t d, std::uint64_t seed,
           std::uint32_t threads) {
          const SvdFactors f =
              randomized_svd(to_sparse_symmetric(a, "matrix"), d, seed, threads);
          return py::make_tuple(to_numpy(f.u), f.s, to_numpy(f.v));
        },
        py::arg("matrix"), py::arg("d"), py::arg("seed") = 1,
        py::arg("threads") = 1,
        "Randomized truncated SVD of a symmetric matrix -> (U, S, V)");

  m.def("trunc_log", &trunc_log, py::arg("x"), "max(0, ln x)");

  m.def("suggest_sample_count", &suggest_sample_count, py::arg("window"),
        py::arg("m"), py::arg("n"), py::arg("epsilon"),
        "Advisory sample budget ceil(window * m * eps^-2 * ln n)");

  m.def("micro_macro_f1", &micro_macro_f1, py::arg("pred"), py::arg("truth"),
        "Pooled and per-label-averaged F1 of multi-label predictions");

  m.def("evaluate_embedding",
        [](const CArray& emb, const std::vector<std::vector<std::uint32_t>>& labels,
           const std::vector<double>& ratios, std::uint32_t repeats,
           std::uint64_t seed, double reg, std::uint32_t threads) {
          if (emb.ndim() != 2) throw ParamError("embedding must be 2-d");
          DenseMatrix dense(emb.shape(0), emb.shape(1));
          std::memcpy(dense.data(), emb.data(),
                      sizeof(double) * dense.rows() * dense.cols());
          const LabelTable table = to_label_table(labels, dense.rows());
          py::list out;
          for (const EvalRow& row :
               evaluate(dense, table, ratios, repeats, seed, reg, threads)) {
            py::dict d;
            d["ratio"] = row.ratio;
            d["micro_mean"] = row.micro_mean;
            d["micro_std"] = row.micro_std;
            d["macro_mean"] = row.macro_mean;
            d["macro_std"] = row.macro_std;
            out.append(d);
          }
          return out;
        },
        py::arg("embedding"), py::arg("labels"), py::arg("ratios"),
        py::arg("repeats") = 10, py::arg("seed") = 1, py::arg("reg") = 1.0,
        py::arg("threads") = 1,
        "Multi-label train/test protocol; one dict per ratio");
}
