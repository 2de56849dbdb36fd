#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsene/graph.hpp"
#include "sparsene/sparse.hpp"

namespace sparsene {

// Hard ceiling for the dense reference routines: O(n^3) work must stay at
// desk scale.
inline constexpr VertexId kOracleCap = 2000;

// Small dense symmetric matrix; set() writes both mirror entries so
// symmetry is exact by construction.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;
  explicit DenseSymmetric(VertexId n) : n_(n), values_(std::size_t(n) * n, 0.0) {}

  VertexId n() const { return n_; }
  double operator()(VertexId i, VertexId j) const {
    return values_[std::size_t(i) * n_ + j];
  }
  void set(VertexId i, VertexId j, double v) {
    values_[std::size_t(i) * n_ + j] = v;
    values_[std::size_t(j) * n_ + i] = v;
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double frobenius_norm() const;
  // Largest |A_ij - A_ji|; exact-zero for anything built via set().
  double symmetry_defect() const;

 private:
  VertexId n_ = 0;
  std::vector<double> values_;
};

DenseSymmetric to_dense_symmetric(const SparseMatrix& a);

// Average random-walk co-visit matrix
//   (1/T) * sum_{r=1..T} (D⁻¹A)^r D⁻¹,
// evaluated densely. SizeError above `cap`.
DenseSymmetric exact_walk_matrix(const Graph& g, std::uint32_t window,
                                 VertexId cap = kOracleCap);

// trunc_log((vol(G)/b) * exact_walk_matrix): the dense reference for the
// sparse PPMI-style matrix.
DenseSymmetric exact_ppmi_matrix(const Graph& g, std::uint32_t window,
                                 double b, VertexId cap = kOracleCap);

// Untruncated elementwise log variant for diagnostics: entries whose
// argument is <= 0 are mapped to 0 and flagged.
struct LogMatrixDiagnostic {
  DenseSymmetric values;
  std::vector<std::uint8_t> undefined;  // n*n row-major flags
  std::uint64_t undefined_count = 0;
};
LogMatrixDiagnostic exact_log_matrix(const Graph& g, std::uint32_t window,
                                     double b, VertexId cap = kOracleCap);

// Walk-polynomial Laplacian D - sum_r alpha_r D (D⁻¹A)^r. With uniform
// alpha this is the sampling target of the sparsifier. ParamError unless
// alpha is nonnegative and sums to 1 within 1e-12.
DenseSymmetric exact_walk_laplacian(const Graph& g,
                                    const std::vector<double>& alpha,
                                    VertexId cap = kOracleCap);

// D⁻¹(D - L)D⁻¹ evaluated densely against g's degrees: converts either
// Laplacian (exact or sampled) into its walk-matrix form.
DenseSymmetric walk_matrix_from_laplacian(const Graph& g,
                                          const DenseSymmetric& l);

// Probability that path sampling (conditioned on length r = path edges)
// draws the given path, identified with its reversal:
//   w(p) * Z(p) / (2 r m),
// w(p) = prod(edge weights) / prod(interior degrees), Z(p) = sum 2/weight.
// ParamError on non-adjacent consecutive vertices.
double path_probability(const Graph& g, const std::vector<VertexId>& path);

// Full enumeration of length-r walk classes and their sampling
// probabilities; classes are walks identified with their reversals,
// canonicalized to the lexicographically smaller orientation. A class
// equal to its own reversal has only one orientation and receives half
// the two-orientation mass. Probabilities sum to exactly 1.
struct PathClass {
  std::vector<VertexId> path;
  double probability;
};
std::vector<PathClass> enumerate_path_distribution(const Graph& g,
                                                   std::uint32_t r);

// Smallest eps >= 0 with (1-eps)·xᵀL̃x <= xᵀLx <= (1+eps)·xᵀL̃x for all x,
// from the extreme generalized eigenvalues of (L, L̃) on the complement of
// the shared all-ones null space. IncomparableError when either matrix is
// not a connected graph's Laplacian (null spaces would differ).
double measure_epsilon(const DenseSymmetric& ltilde, const DenseSymmetric& l);

struct BoundRow {
  std::uint32_t index;  // 1-based
  double sigma;
  double bound;
  double margin;  // bound - sigma
};

// Result of a spectral bound check; `table()` renders the per-index rows,
// `summary()` the machine-readable "PASS" / "FAIL epsilon=... " line.
struct BoundReport {
  bool pass = false;
  double epsilon = 0.0;
  double worst_margin = 0.0;
  double lhs = 0.0;  // Frobenius checker only
  double rhs = 0.0;
  std::vector<BoundRow> rows;

  std::string table() const;
  std::string summary() const;
};

// Checks every singular value of mtilde - m against 4·eps/sqrt(d_i·d_min)
// with singular values descending paired against degrees ascending.
// RegimeError when eps >= 0.5 (the guarantee's standing assumption).
BoundReport check_singular_bound(const DenseSymmetric& mtilde,
                                 const DenseSymmetric& m, double eps,
                                 const Graph& g);

// Checks ||trunc_log((vol/b)M̃) - trunc_log((vol/b)M)||_F against
// (4·eps·vol/(b·sqrt(d_min))) · sqrt(sum_i 1/d_i), where M̃ and M are
// derived from the two Laplacians via D⁻¹(D - L)D⁻¹.
BoundReport check_frobenius_bound(const Graph& g, const DenseSymmetric& ltilde,
                                  const DenseSymmetric& l, double eps,
                                  double b);

// Averages the sampled Laplacian over independent builds and reports the
// relative Frobenius distance to the exact walk-polynomial Laplacian.
struct UnbiasednessReport {
  double relative_error = 0.0;
  std::uint32_t trials = 0;
  std::uint64_t samples_per_trial = 0;

  std::string summary() const;
};
UnbiasednessReport monte_carlo_unbiasedness(const Graph& g,
                                            std::uint32_t window,
                                            std::uint64_t samples,
                                            std::uint32_t trials,
                                            std::uint64_t seed,
                                            std::uint32_t threads = 1);

}  // namespace sparsene
