#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sparsene {

// Row-major dense matrix of doubles, zero-initialized.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  double* row(std::size_t r) { return values_.data() + r * cols_; }
  const double* row(std::size_t r) const { return values_.data() + r * cols_; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && values_ == o.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// n rows (one per dense vertex id) by d columns.
using EmbeddingMatrix = DenseMatrix;

// a (r×k) times b (k×c); optional row parallelism.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b,
                   std::uint32_t threads = 1);

// aᵀ (c×r) times b (r×k) without forming the transpose.
DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace sparsene
