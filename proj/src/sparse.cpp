#include "sparsene/sparse.hpp"

#include <algorithm>

#include "sparsene/errors.hpp"
#include "sparsene/parallel.hpp"

namespace sparsene {

SparseMatrix SparseMatrix::from_triplets(VertexId n,
                                         std::vector<Triplet> triplets,
                                         bool symmetric) {
  for (const Triplet& t : triplets)
    if (t.row >= n || t.col >= n)
      throw ParamError("triplet index out of range");
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  std::vector<Triplet> merged;
  merged.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  SparseMatrix m;
  m.n_ = n;
  m.symmetric_ = symmetric;
  m.entries_ = std::move(merged);
  m.offsets_.assign(std::size_t(n) + 1, 0);
  for (const Triplet& t : m.entries_) ++m.offsets_[std::size_t(t.row) + 1];
  for (std::size_t r = 0; r < n; ++r) m.offsets_[r + 1] += m.offsets_[r];

  if (symmetric) {
    // Pairing invariant: (i,j) present iff (j,i) present, bitwise equal.
    for (const Triplet& t : m.entries_) {
      if (t.row == t.col) continue;
      const std::size_t b = m.offsets_[t.col], e = m.offsets_[t.col + 1];
      const Triplet* lo = m.entries_.data() + b;
      const Triplet* hi = m.entries_.data() + e;
      const Triplet* it = std::lower_bound(
          lo, hi, t.row,
          [](const Triplet& x, VertexId col) { return x.col < col; });
      if (it == hi || it->col != t.row || it->value != t.value)
        throw ParamError("symmetric matrix has unpaired entry");
    }
  }
  return m;
}

DenseMatrix SparseMatrix::multiply(const DenseMatrix& x,
                                   std::uint32_t threads) const {
  if (x.rows() != n_) throw ParamError("spmm: dimension mismatch");
  DenseMatrix out(n_, x.cols());
  const std::size_t k = x.cols();
  parallel_for(n_, threads, [&](std::uint64_t r) {
    double* dst = out.row(r);
    for (std::size_t i = offsets_[r]; i < offsets_[r + 1]; ++i) {
      const double v = entries_[i].value;
      const double* src = x.row(entries_[i].col);
      for (std::size_t j = 0; j < k; ++j) dst[j] += v * src[j];
    }
  });
  return out;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix out(n_, n_);
  for (const Triplet& t : entries_) out(t.row, t.col) = t.value;
  return out;
}

}  // namespace sparsene
