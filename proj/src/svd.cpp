#include "sparsene/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sparsene/errors.hpp"
#include "sparsene/parallel.hpp"
#include "sparsene/rng.hpp"

namespace sparsene {

namespace {

// Tags separating the two virtual Gaussian matrices drawn from one seed.
constexpr std::uint64_t kTagRangeSketch = 0x4f;    // n×d test matrix
constexpr std::uint64_t kTagProjectSketch = 0x50;  // d×d test matrix

double column_dot(const DenseMatrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, a) * m(r, b);
  return s;
}

void column_axpy(DenseMatrix& m, std::size_t dst, std::size_t src,
                 double factor) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) += factor * m(r, src);
}

void column_scale(DenseMatrix& m, std::size_t c, double factor) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= factor;
}

// Subtract from column j its projections onto the orthonormal columns
// 0..j-1; two passes keep the result orthogonal to working precision.
void project_out(DenseMatrix& y, std::size_t j) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < j; ++i)
      column_axpy(y, j, i, -column_dot(y, i, j));
}

// Replace column j by the canonical basis vector least represented in the
// orthonormal columns 0..j-1 (deterministic completion for rank-deficient
// sketches), then orthonormalize it.
void complete_column(DenseMatrix& y, std::size_t j) {
  std::size_t best_row = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < y.rows(); ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += y(r, i) * y(r, i);
    if (s < best) {
      best = s;
      best_row = r;
    }
  }
  for (std::size_t r = 0; r < y.rows(); ++r) y(r, j) = 0.0;
  y(best_row, j) = 1.0;
  project_out(y, j);
  const double norm = std::sqrt(column_dot(y, j, j));
  column_scale(y, j, 1.0 / norm);
}

// Tolerant orthonormalization for the sketching pipeline: columns that
// collapse are completed with deterministic basis directions instead of
// rejected, so inputs of rank < d still factor. Only a numerically zero
// matrix is an error.
void orthonormalize_completing(DenseMatrix& y) {
  double scale = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j)
    scale = std::max(scale, std::sqrt(column_dot(y, j, j)));
  if (scale < 1e-250)
    throw NumericalError("matrix is numerically zero; no factorization");
  const double tol = scale * 1e-13;
  for (std::size_t j = 0; j < y.cols(); ++j) {
    project_out(y, j);
    const double norm = std::sqrt(column_dot(y, j, j));
    if (norm <= tol)
      complete_column(y, j);
    else
      column_scale(y, j, 1.0 / norm);
  }
}

}  // namespace

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed, std::uint64_t tag) {
  DenseMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out(r, c) = gaussian_at(seed, tag, r * cols + c);
  return out;
}

void orthonormalize(DenseMatrix& y) {
  if (y.rows() < y.cols())
    throw ParamError("orthonormalize requires rows >= cols");
  for (std::size_t j = 0; j < y.cols(); ++j) {
    project_out(y, j);
    const double norm = std::sqrt(column_dot(y, j, j));
    if (norm < 1e-12)
      throw NumericalError("rank deficiency at column " + std::to_string(j));
    column_scale(y, j, 1.0 / norm);
  }
}

SvdFactors jacobi_svd(DenseMatrix c) {
  if (c.rows() != c.cols()) throw ParamError("jacobi_svd requires square input");
  const std::size_t d = c.rows();
  DenseMatrix v(d, d);
  for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

  // One-sided rotations orthogonalize column pairs; V accumulates them.
  constexpr int kMaxSweeps = 60;
  constexpr double kTol = 1e-15;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double alpha = column_dot(c, p, p);
        const double beta = column_dot(c, q, q);
        const double gamma = column_dot(c, p, q);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t r = 0; r < d; ++r) {
          const double cp = c(r, p), cq = c(r, q);
          c(r, p) = cs * cp - sn * cq;
          c(r, q) = sn * cp + cs * cq;
          const double vp = v(r, p), vq = v(r, q);
          v(r, p) = cs * vp - sn * vq;
          v(r, q) = sn * vp + cs * vq;
        }
      }
    }
  }
  if (!converged)
    throw NumericalError("jacobi rotations did not converge");

  std::vector<double> norms(d);
  for (std::size_t j = 0; j < d; ++j)
    norms[j] = std::sqrt(column_dot(c, j, j));
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return norms[a] > norms[b];
  });

  SvdFactors out;
  out.s.resize(d);
  out.u = DenseMatrix(d, d);
  out.v = DenseMatrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = order[j];
    out.s[j] = norms[src];
    for (std::size_t r = 0; r < d; ++r) out.v(r, j) = v(r, src);
    if (norms[src] > 1e-300) {
      const double inv = 1.0 / norms[src];
      for (std::size_t r = 0; r < d; ++r) out.u(r, j) = c(r, src) * inv;
    }
  }
  // Zero singular values leave their U columns unconstrained; complete
  // them so U stays orthogonal.
  for (std::size_t j = 0; j < d; ++j)
    if (out.s[j] <= 1e-300) complete_column(out.u, j);
  return out;
}

SvdFactors randomized_svd(const SparseMatrix& a, std::uint32_t d,
                          std::uint64_t seed, std::uint32_t threads) {
  const std::size_t n = a.n();
  if (d < 1) throw ParamError("dim must be >= 1");
  if (n < d) throw ParamError("matrix dimension must be >= dim");
  if (a.symmetric() == false)
    throw ParamError("randomized_svd requires a symmetric matrix");

  DenseMatrix y =
      a.multiply(gaussian_matrix(n, d, seed, kTagRangeSketch), threads);
  orthonormalize_completing(y);
  DenseMatrix b = a.multiply(y, threads);
  DenseMatrix z =
      matmul(b, gaussian_matrix(d, d, seed, kTagProjectSketch), threads);
  orthonormalize_completing(z);
  DenseMatrix c = transpose_matmul(z, b);

  SvdFactors small = jacobi_svd(std::move(c));
  SvdFactors out;
  out.u = matmul(z, small.u, threads);
  out.s = std::move(small.s);
  out.v = matmul(y, small.v, threads);
  return out;
}

DenseMatrix embed(const DenseMatrix& u, const std::vector<double>& s) {
  if (s.size() != u.cols())
    throw ParamError("spectrum length must match column count");
  for (double x : s)
    if (x < 0.0) throw ParamError("negative singular value");
  DenseMatrix out(u.rows(), u.cols());
  std::vector<double> root(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) root[j] = std::sqrt(s[j]);
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t j = 0; j < u.cols(); ++j)
      out(r, j) = u(r, j) * root[j];
  return out;
}

std::vector<std::pair<std::uint32_t, double>> scree_data(
    const std::vector<double>& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[i - 1])
      throw ParamError("singular values must be nonincreasing");
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out.emplace_back(std::uint32_t(i + 1), s[i]);
  return out;
}

}  // namespace sparsene
