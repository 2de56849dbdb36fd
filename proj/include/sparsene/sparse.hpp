#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparsene/dense.hpp"
#include "sparsene/graph.hpp"

namespace sparsene {

struct Triplet {
  VertexId row;
  VertexId col;
  double value;
};

// Sparse square matrix kept as coordinate triplets sorted row-major, with
// row offsets for compressed iteration. When flagged symmetric, entry
// (i,j) is present iff (j,i) is, with bitwise-equal values (validated at
// construction). No explicit zeros are stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Sorts triplets row-major, merges duplicates by summation, drops exact
  // zeros, and builds row offsets. With symmetric=true the pairing
  // invariant is checked.
  static SparseMatrix from_triplets(VertexId n, std::vector<Triplet> triplets,
                                    bool symmetric);

  VertexId n() const { return n_; }
  std::size_t nnz() const { return entries_.size(); }
  bool symmetric() const { return symmetric_; }
  const std::vector<Triplet>& entries() const { return entries_; }

  std::size_t row_begin(VertexId r) const { return offsets_[r]; }
  std::size_t row_end(VertexId r) const { return offsets_[r + 1]; }

  // this (n×n) times x (n×k), parallel over rows; results are identical
  // for every thread count since each row is an independent reduction.
  DenseMatrix multiply(const DenseMatrix& x, std::uint32_t threads = 1) const;

  DenseMatrix to_dense() const;

 private:
  VertexId n_ = 0;
  bool symmetric_ = false;
  std::vector<Triplet> entries_;
  std::vector<std::size_t> offsets_;  // n+1
};

}  // namespace sparsene
