#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sparsene/dense.hpp"
#include "sparsene/graph.hpp"

namespace sparsene {

// Per-vertex label sets with a dense label universe [0, label_count).
struct LabelTable {
  std::vector<std::vector<std::uint32_t>> labels;  // sorted unique per vertex
  std::uint32_t label_count = 0;

  std::vector<VertexId> labeled_vertices() const;
};

// Parses "vertex_id label_id" lines (multi-label via repetition). Raw
// label ids are densified in sorted order. When raw_to_dense is given,
// vertex ids pass through it; otherwise they are taken as dense ids
// directly. Vertices outside [0, n_vertices) raise ParseError.
LabelTable parse_labels(std::istream& in, std::size_t n_vertices,
                        const std::unordered_map<std::uint64_t, VertexId>*
                            raw_to_dense = nullptr);

// Uniform shuffle split of the labeled vertices: round(ratio * count)
// into train, rest into test. ParamError when either side is empty.
std::pair<std::vector<VertexId>, std::vector<VertexId>> split(
    const LabelTable& labels, double train_ratio, std::uint64_t seed);

// One-vs-rest L2-regularized logistic regression models; the bias is
// trained but never regularized. A label with no positive training
// example gets the constant-negative scorer (zero weights, very negative
// bias) and is flagged degenerate.
struct OvrModel {
  std::size_t dim = 0;
  double reg = 1.0;
  std::vector<std::vector<double>> weights;  // label -> d reals
  std::vector<double> bias;
  std::vector<std::uint8_t> degenerate;
  std::vector<std::uint8_t> hit_iteration_cap;
};

// Full-batch gradient descent with backtracking line search per label, to
// gradient norm <= 1e-6 or the iteration cap (flagged). Deterministic;
// labels may train in parallel.
OvrModel train_ovr(const DenseMatrix& emb, const LabelTable& labels,
                   const std::vector<VertexId>& train_ids, double reg,
                   std::uint32_t threads = 1);

// The k highest-scoring labels for one embedding row; ties broken toward
// the lower label id. Returns min(k, label_count) labels, sorted by id.
std::vector<std::uint32_t> predict_topk(const OvrModel& model,
                                        const double* row, std::uint32_t k);

// Micro: F1 over TP/FP/FN pooled across all (vertex, label) decisions.
// Macro: unweighted mean of per-label F1 over labels present in `truth`,
// with 0/0 defined as 0.
std::pair<double, double> micro_macro_f1(
    const std::vector<std::vector<std::uint32_t>>& pred,
    const std::vector<std::vector<std::uint32_t>>& truth);

struct EvalRow {
  double ratio;
  double micro_mean, micro_std;
  double macro_mean, macro_std;
};

// For each train ratio: `repeats` independent split/train/predict rounds
// (the test-time label count is given, matching the top-k protocol), then
// mean and sample standard deviation of both F1 scores.
std::vector<EvalRow> evaluate(const DenseMatrix& emb, const LabelTable& labels,
                              const std::vector<double>& ratios,
                              std::uint32_t repeats, std::uint64_t seed,
                              double reg, std::uint32_t threads = 1);

// Tab-separated "ratio micro_mean micro_std macro_mean macro_std" table.
std::string format_eval_report(const std::vector<EvalRow>& rows);

}  // namespace sparsene
