#include "sparsene/dense.hpp"

#include "sparsene/errors.hpp"
#include "sparsene/parallel.hpp"

namespace sparsene {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b,
                   std::uint32_t threads) {
  if (a.cols() != b.rows()) throw ParamError("matmul: dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  const std::size_t k = a.cols(), c = b.cols();
  parallel_for(a.rows(), threads, [&](std::uint64_t r) {
    double* dst = out.row(r);
    const double* arow = a.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      const double av = arow[j];
      if (av == 0.0) continue;
      const double* brow = b.row(j);
      for (std::size_t t = 0; t < c; ++t) dst[t] += av * brow[t];
    }
  });
  return out;
}

DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows())
    throw ParamError("transpose_matmul: dimension mismatch");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* arow = a.row(r);
    const double* brow = b.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* dst = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += av * brow[j];
    }
  }
  return out;
}

}  // namespace sparsene
