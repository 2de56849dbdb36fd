#include "sparsene/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

namespace sparsene {

namespace {

std::string describe_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

Graph Graph::from_edges(std::vector<Edge> edges, VertexId n, bool weighted) {
  if (n == 0) throw ParamError("graph must have at least one vertex");
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n)
      throw ParamError("edge endpoint out of range: " + std::to_string(e.u) +
                       " " + std::to_string(e.v));
    if (e.u == e.v)
      throw ParamError("self-loop on vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw ParamError("non-positive edge weight on " + std::to_string(e.u) +
                       " " + std::to_string(e.v));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  // Merge duplicates by weight summation.
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().w += e.w;
    else
      merged.push_back(e);
  }
  if (merged.empty()) throw ParamError("graph has no edges");

  Graph g;
  g.n_ = n;
  g.weighted_ = weighted;
  g.edges_ = std::move(merged);

  std::vector<std::size_t> counts(n, 0);
  for (const Edge& e : g.edges_) {
    ++counts[e.u];
    ++counts[e.v];
  }
  for (VertexId v = 0; v < n; ++v)
    if (counts[v] == 0)
      throw ParamError("isolated vertex " + std::to_string(v) +
                       " (degree would be zero)");

  g.offsets_.assign(n + 1, 0);
  for (VertexId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + counts[v];
  const std::size_t total = g.offsets_[n];
  g.nbr_ids_.resize(total);
  g.nbr_weights_.resize(total);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.nbr_ids_[cursor[e.u]] = e.v;
    g.nbr_weights_[cursor[e.u]++] = e.w;
    g.nbr_ids_[cursor[e.v]] = e.u;
    g.nbr_weights_[cursor[e.v]++] = e.w;
  }
  // Edge-sorted filling already leaves each row ascending; sort rows
  // anyway so the invariant never depends on that argument.
  for (VertexId v = 0; v < n; ++v) {
    const std::size_t b = g.offsets_[v], e = g.offsets_[v + 1];
    std::vector<std::pair<VertexId, double>> row;
    row.reserve(e - b);
    for (std::size_t i = b; i < e; ++i)
      row.emplace_back(g.nbr_ids_[i], g.nbr_weights_[i]);
    std::sort(row.begin(), row.end());
    for (std::size_t i = b; i < e; ++i) {
      g.nbr_ids_[i] = row[i - b].first;
      g.nbr_weights_[i] = row[i - b].second;
    }
  }

  g.degrees_.assign(n, 0.0);
  g.nbr_cum_weights_.resize(total);
  g.unit_weights_ = true;
  double volume = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    double acc = 0.0;
    for (std::size_t i = g.offsets_[v]; i < g.offsets_[v + 1]; ++i) {
      acc += g.nbr_weights_[i];
      g.nbr_cum_weights_[i] = acc;
      if (g.nbr_weights_[i] != 1.0) g.unit_weights_ = false;
    }
    g.degrees_[v] = acc;
    volume += acc;
  }
  g.volume_ = volume;

  g.raw_ids_.resize(n);
  for (VertexId v = 0; v < n; ++v) g.raw_ids_[v] = v;
  return g;
}

double Graph::edge_weight(VertexId u, VertexId v) const {
  const std::size_t b = offsets_[u], e = offsets_[u + 1];
  const VertexId* first = nbr_ids_.data() + b;
  const VertexId* last = nbr_ids_.data() + e;
  const VertexId* it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return 0.0;
  return nbr_weights_[b + std::size_t(it - first)];
}

VertexId Graph::sample_neighbor(VertexId v, Rng& rng) const {
  const std::size_t b = offsets_[v];
  const std::size_t deg = offsets_[v + 1] - b;
  if (unit_weights_) return nbr_ids_[b + rng.next_index(deg)];
  const double target = rng.next_double() * nbr_cum_weights_[b + deg - 1];
  const double* first = nbr_cum_weights_.data() + b;
  const double* it = std::upper_bound(first, first + deg, target);
  std::size_t k = std::size_t(it - first);
  if (k >= deg) k = deg - 1;  // guard against target == total
  return nbr_ids_[b + k];
}

Graph::WalkResult Graph::random_walk_with_cost(
    VertexId start, std::uint32_t steps, Rng& rng,
    std::vector<VertexId>* trace) const {
  VertexId at = start;
  double cost = 0.0;
  for (std::uint32_t s = 0; s < steps; ++s) {
    const VertexId next = sample_neighbor(at, rng);
    cost += 2.0 / edge_weight(at, next);
    at = next;
    if (trace) trace->push_back(at);
  }
  return {at, cost};
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && weighted_ == other.weighted_ &&
         offsets_ == other.offsets_ && nbr_ids_ == other.nbr_ids_ &&
         nbr_weights_ == other.nbr_weights_ && raw_ids_ == other.raw_ids_;
}

Graph load_edge_list(std::istream& in, bool weighted) {
  struct RawEdge {
    std::uint64_t u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream ls(line);
    std::string tu, tv, tw, extra;
    ls >> tu >> tv;
    if (tu.empty() || tv.empty())
      throw ParseError(describe_line(line_no, "expected at least two fields"));
    const bool has_w = static_cast<bool>(ls >> tw);
    if (ls >> extra)
      throw ParseError(describe_line(line_no, "too many fields"));
    if (weighted && !has_w)
      throw ParseError(describe_line(line_no, "missing edge weight"));
    if (!weighted && has_w)
      throw ParseError(
          describe_line(line_no, "unexpected weight field (unweighted mode)"));

    auto parse_id = [&](const std::string& tok) -> std::uint64_t {
      std::uint64_t value = 0;
      const char* begin = tok.data();
      const char* end = begin + tok.size();
      auto [p, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || p != end)
        throw ParseError(
            describe_line(line_no, "bad vertex id '" + tok + "'"));
      return value;
    };
    const std::uint64_t u = parse_id(tu);
    const std::uint64_t v = parse_id(tv);
    if (u == v)
      throw ParseError(describe_line(line_no, "self-loop rejected"));

    double w = 1.0;
    if (has_w) {
      try {
        std::size_t used = 0;
        w = std::stod(tw, &used);
        if (used != tw.size()) throw std::invalid_argument(tw);
      } catch (const std::exception&) {
        throw ParseError(describe_line(line_no, "bad weight '" + tw + "'"));
      }
      if (!(w > 0.0) || !std::isfinite(w))
        throw ParseError(
            describe_line(line_no, "non-positive weight rejected"));
    }
    raw.push_back({u, v, w});
  }
  if (raw.empty()) throw ParseError("no edges in input");

  // Densify raw ids in sorted order; the mapping travels with the graph.
  std::map<std::uint64_t, VertexId> to_dense;
  for (const RawEdge& e : raw) {
    to_dense.emplace(e.u, 0);
    to_dense.emplace(e.v, 0);
  }
  if (to_dense.size() > std::size_t(std::uint32_t(-1)))
    throw SizeError("too many vertices");
  VertexId next_id = 0;
  std::vector<std::uint64_t> raw_ids(to_dense.size());
  for (auto& [raw_id, dense] : to_dense) {
    dense = next_id;
    raw_ids[next_id++] = raw_id;
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw)
    edges.push_back({to_dense[e.u], to_dense[e.v], e.w});

  Graph g = Graph::from_edges(std::move(edges),
                              static_cast<VertexId>(raw_ids.size()), weighted);
  g.raw_ids_ = std::move(raw_ids);
  return g;
}

Graph load_edge_list_file(const std::string& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  return load_edge_list(in, weighted);
}

}  // namespace sparsene
