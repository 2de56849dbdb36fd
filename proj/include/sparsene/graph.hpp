#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsene/errors.hpp"
#include "sparsene/rng.hpp"

namespace sparsene {

// Dense vertex index in [0, n). Raw input ids are remapped at load time.
using VertexId = std::uint32_t;

// One undirected edge in canonical orientation (u < v), positive weight.
struct Edge {
  VertexId u;
  VertexId v;
  double w;
};

// Immutable undirected weighted graph in compressed adjacency form.
// Stores per-vertex sorted neighbor lists (both directions), generalized
// degrees d_i = sum_j A_ij, the volume sum_i d_i, and per-vertex cumulative
// weight arrays for roulette-wheel neighbor sampling.
class Graph {
 public:
  // Builds from a deduplicated-or-not edge list over dense ids [0, n).
  // Duplicate edges merge by weight summation. Rejects self-loops,
  // non-positive weights, out-of-range endpoints, and isolated vertices.
  static Graph from_edges(std::vector<Edge> edges, VertexId n, bool weighted);

  VertexId n() const { return n_; }
  std::uint64_t edge_count() const { return edges_.size(); }  // m
  double degree(VertexId v) const { return degrees_[v]; }
  const std::vector<double>& degrees() const { return degrees_; }
  double volume() const { return volume_; }
  bool weighted() const { return weighted_; }

  struct NeighborRange {
    const VertexId* ids;
    const double* weights;
    std::size_t size;
  };
  NeighborRange neighbors(VertexId v) const {
    const std::size_t b = offsets_[v];
    return {nbr_ids_.data() + b, nbr_weights_.data() + b, offsets_[v + 1] - b};
  }

  // Weight of edge {u,v}, or 0 if absent. O(log deg(u)).
  double edge_weight(VertexId u, VertexId v) const;

  // Distinct edges in canonical (u < v) order, sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  // Dense id -> raw input id (identity when built programmatically).
  const std::vector<std::uint64_t>& raw_ids() const { return raw_ids_; }

  // Draws neighbor u of v with probability A_vu / d_v. O(1) when all
  // weights are 1, otherwise binary search on the cumulative weights.
  VertexId sample_neighbor(VertexId v, Rng& rng) const;

  struct WalkResult {
    VertexId endpoint;
    double cost;  // sum over traversed edges of 2 / edge weight
  };
  // `steps` neighbor-sampling hops from `start`; also returns the walk's
  // inverse-weight cost. Appends visited vertices (excluding `start`) to
  // *trace when given.
  WalkResult random_walk_with_cost(VertexId start, std::uint32_t steps,
                                   Rng& rng,
                                   std::vector<VertexId>* trace = nullptr) const;

  bool operator==(const Graph& other) const;

 private:
  Graph() = default;
  friend Graph load_edge_list(std::istream& in, bool weighted);

  VertexId n_ = 0;
  bool weighted_ = false;
  bool unit_weights_ = true;
  std::vector<std::size_t> offsets_;       // n+1 row offsets
  std::vector<VertexId> nbr_ids_;          // sorted per row
  std::vector<double> nbr_weights_;
  std::vector<double> nbr_cum_weights_;    // inclusive prefix sums per row
  std::vector<double> degrees_;
  double volume_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> raw_ids_;
};

// Parses "u v" / "u v w" lines ('#' comments, LF or CRLF) and builds a
// Graph with raw ids densely remapped in sorted order. Raises ParseError
// with the offending line number on malformed input, self-loops, or
// non-positive weights.
Graph load_edge_list(std::istream& in, bool weighted);
Graph load_edge_list_file(const std::string& path, bool weighted);

}  // namespace sparsene
