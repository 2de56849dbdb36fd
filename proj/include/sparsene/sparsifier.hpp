#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sparsene/graph.hpp"
#include "sparsene/rng.hpp"
#include "sparsene/sparse.hpp"

namespace sparsene {

// All pipeline hyperparameters. The sample budget is either `samples`
// directly or `multiplier` k with samples = k * window * m resolved
// against the input graph.
struct PipelineConfig {
  std::uint32_t window = 10;    // random-walk context window T
  std::uint64_t samples = 0;    // explicit sample count; 0 -> use multiplier
  double multiplier = 0.0;      // k in samples = k * window * m
  std::uint32_t dim = 128;      // embedding dimension
  double negative = 1.0;        // negative-sample count b
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;
  bool weighted = false;
  // Optional length-`window` nonnegative weights summing to 1 for the
  // dense reference Laplacian; sampling itself always realizes the
  // uniform 1/window weighting. Empty means uniform.
  std::vector<double> alpha;

  void validate() const;  // ParamError on violations
  std::uint64_t resolve_samples(std::uint64_t edge_count) const;
};

// One drawn path: its two endpoints, the inverse-weight cost
// z = sum over the r path edges of 2/weight, and the length r.
struct PathSample {
  VertexId u0;
  VertexId ur;
  double z;
  std::uint32_t r;
};

// Mergeable map from unordered vertex pairs {u,v}, u != v, to accumulated
// sample weight. Samples whose endpoints coincide add equal amounts to the
// degree and adjacency parts of the Laplacian, cancelling exactly, so they
// are counted and dropped rather than stored.
class SparsifierAccumulator {
 public:
  void add(VertexId a, VertexId b, double weight);
  void merge(SparsifierAccumulator&& other);

  std::uint64_t sample_count() const { return samples_; }
  std::uint64_t dropped_self_loops() const { return dropped_; }
  std::uint64_t pair_count() const { return pairs_.size(); }
  double total_weight() const;

  // Canonical contents: (u, v, weight) with u < v, sorted. This is the
  // deterministic iteration order used everywhere downstream.
  std::vector<Triplet> sorted_pairs() const;

 private:
  std::unordered_map<std::uint64_t, double> pairs_;
  std::uint64_t samples_ = 0;
  std::uint64_t dropped_ = 0;
};

// Draws k uniform in [1,r], walks k-1 steps from e.u and r-k steps from
// e.v, and returns the endpoints with the full path cost (including edge e
// itself). The traced variant additionally writes the complete vertex
// sequence from one endpoint to the other; both consume the random stream
// identically.
PathSample path_sampling(const Graph& g, const Edge& e, std::uint32_t r,
                         Rng& rng);
PathSample path_sampling_traced(const Graph& g, const Edge& e, std::uint32_t r,
                                Rng& rng, std::vector<VertexId>& trace);

// Weight contributed by one sample: 2 * r * m / (samples * z).
double per_sample_weight(const Graph& g, const PathSample& sample,
                         std::uint64_t total_samples);

// Repeats `samples` times: uniform edge, uniform length in [1, window],
// path_sampling, accumulate per_sample_weight onto the endpoint pair.
// Sharded across cfg.threads workers with per-worker random streams and a
// worker-ordered merge: deterministic for fixed (seed, threads).
SparsifierAccumulator build_sparsifier(const Graph& g,
                                       const PipelineConfig& cfg);

// Unnormalized Laplacian D - A of the accumulated graph, symmetric sparse.
SparseMatrix laplacian_of(const SparsifierAccumulator& acc, VertexId n);
// Same, from canonical (u < v, sorted) pair triplets.
SparseMatrix laplacian_from_pairs(const std::vector<Triplet>& pairs,
                                  VertexId n);

// max(0, ln x); defined as 0 for all x <= 1 including nonpositive input.
double trunc_log(double x);

// Entrywise trunc_log((vol(G)/b) * D⁻¹(D - L̃)D⁻¹) over L̃'s sparsity
// pattern plus the diagonal; zeros dropped; output symmetric. This is the
// sparse co-occurrence (PPMI-style) matrix handed to the factorizer.
SparseMatrix ppmi_sparsifier(const Graph& g, const SparseMatrix& ltilde,
                             double b);

// Advisory sample budget ceil(window * m * eps^-2 * ln n) for a target
// spectral approximation eps in (0, 0.5].
std::uint64_t suggest_sample_count(std::uint32_t window, std::uint64_t m,
                                   std::uint64_t n, double epsilon);

}  // namespace sparsene
