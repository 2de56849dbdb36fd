#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sparsene/dense.hpp"
#include "sparsene/sparse.hpp"

namespace sparsene {

struct SvdFactors {
  DenseMatrix u;
  std::vector<double> s;  // nonincreasing, nonnegative
  DenseMatrix v;
};

// Virtual Gaussian test matrix: entry (i,j) is a standard normal drawn by
// a counter-based generator keyed on (seed, tag, i*cols+j), so the result
// is independent of evaluation order and thread count.
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed, std::uint64_t tag);

// Modified Gram–Schmidt with one re-orthogonalization pass, in place.
// A column whose residual norm falls below 1e-12 raises NumericalError
// naming the deficient column.
void orthonormalize(DenseMatrix& y);

// One-sided Jacobi SVD of a small square matrix. U·diag(S)·Vᵀ reconstructs
// the input to round-off; S nonincreasing and nonnegative; U, V orthogonal.
// NumericalError if rotations have not converged after the sweep cap.
SvdFactors jacobi_svd(DenseMatrix c);

// Sketch-based truncated SVD of a symmetric sparse matrix:
//   O = gaussian(n×d); Y = A·O; orthonormalize Y; B = A·Y;
//   P = gaussian(d×d); Z = B·P; orthonormalize Z;
//   C = Zᵀ·B = U_c·S·V_cᵀ (Jacobi); return (Z·U_c, S, Y·V_c).
// Exact (to round-off) for inputs of rank <= d. Rank-deficient sketches
// are completed with deterministic canonical basis directions rather than
// rejected, so low-rank inputs succeed; a numerically zero input raises
// NumericalError.
SvdFactors randomized_svd(const SparseMatrix& a, std::uint32_t d,
                          std::uint64_t seed, std::uint32_t threads = 1);

// Column j of u scaled by sqrt(s_j): the embedding rows.
// ParamError on negative s entries.
DenseMatrix embed(const DenseMatrix& u, const std::vector<double>& s);

// Pairs singular values with 1-based ranks for external scree plotting.
// ParamError if the input is not nonincreasing.
std::vector<std::pair<std::uint32_t, double>> scree_data(
    const std::vector<double>& s);

}  // namespace sparsene
