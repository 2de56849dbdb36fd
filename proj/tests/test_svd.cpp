#include <doctest.h>

#include <sparsene/errors.hpp>
#include <sparsene/sparse.hpp>
#include <sparsene/svd.hpp>

#include "support/synth.hpp"

#include <cmath>
#include <vector>

using namespace sparsene;
using namespace testsupport;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

double gram_identity_defect(const DenseMatrix& q) {
  DenseMatrix g = transpose_matmul(q, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

DenseMatrix reconstruct(const SvdFactors& f) {
  DenseMatrix us = f.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.s[j];
  DenseMatrix vt(f.v.cols(), f.v.rows());
  for (std::size_t i = 0; i < f.v.rows(); ++i)
    for (std::size_t j = 0; j < f.v.cols(); ++j) vt(j, i) = f.v(i, j);
  return matmul(us, vt);
}

double rel_frobenius_error(const DenseMatrix& approx, const DenseMatrix& exact) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.rows(); ++i) {
    for (std::size_t j = 0; j < exact.cols(); ++j) {
      const double d = approx(i, j) - exact(i, j);
      num += d * d;
      den += exact(i, j) * exact(i, j);
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("gaussian matrix is deterministic and order-free") {
  DenseMatrix a = gaussian_matrix(6, 4, 12, 0x4f);
  DenseMatrix b = gaussian_matrix(6, 4, 12, 0x4f);
  CHECK(a == b);
  DenseMatrix c = gaussian_matrix(6, 4, 12, 0x50);
  CHECK_FALSE(a == c);
  CHECK(a.all_finite());
}

TEST_CASE("orthonormalize on a full-rank 2x2") {
  DenseMatrix y(2, 2);
  y(0, 0) = 1.0;
  y(0, 1) = 1.0;
  y(1, 0) = 0.0;
  y(1, 1) = 1.0;
  orthonormalize(y);
  CHECK(gram_identity_defect(y) < 1e-14);
  CHECK(std::abs(y(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(y(1, 1)) == doctest::Approx(1.0));
  CHECK(y(1, 0) == doctest::Approx(0.0));
  CHECK(y(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("orthonormalize rejects rank deficiency and bad shapes") {
  DenseMatrix y(2, 2);
  y(0, 0) = 1.0;
  y(0, 1) = 1.0;
  y(1, 0) = 1.0;
  y(1, 1) = 1.0;
  CHECK_THROWS_AS(orthonormalize(y), NumericalError);
  DenseMatrix wide(2, 3);
  CHECK_THROWS_AS(orthonormalize(wide), ParamError);
}

TEST_CASE("orthonormalize handles tall random matrices") {
  DenseMatrix y = gaussian_matrix(60, 12, 3, 0x7);
  orthonormalize(y);
  CHECK(gram_identity_defect(y) < 1e-12);
}

TEST_CASE("jacobi svd on a diagonal matrix sorts singular values") {
  DenseMatrix c(2, 2);
  c(0, 0) = 2.0;
  c(1, 1) = 5.0;
  SvdFactors f = jacobi_svd(c);
  REQUIRE(f.s.size() == 2);
  CHECK(f.s[0] == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(f.s[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(max_abs_diff(reconstruct(f), c) < 1e-12);
}

TEST_CASE("jacobi svd of an antidiagonal matrix") {
  DenseMatrix c(2, 2);
  c(0, 1) = 2.0;
  c(1, 0) = 1.0;
  SvdFactors f = jacobi_svd(c);
  CHECK(f.s[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.s[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(max_abs_diff(reconstruct(f), c) < 1e-12);
  CHECK(gram_identity_defect(f.u) < 1e-12);
  CHECK(gram_identity_defect(f.v) < 1e-12);
}

TEST_CASE("jacobi svd on random matrices reconstructs and stays orthogonal") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DenseMatrix c = gaussian_matrix(8, 8, seed, 0x33);
    SvdFactors f = jacobi_svd(c);
    CHECK(max_abs_diff(reconstruct(f), c) < 1e-11);
    CHECK(gram_identity_defect(f.u) < 1e-11);
    CHECK(gram_identity_defect(f.v) < 1e-11);
    for (std::size_t k = 0; k + 1 < f.s.size(); ++k) {
      CHECK(f.s[k] >= f.s[k + 1]);
      CHECK(f.s[k + 1] >= 0.0);
    }
  }
}

TEST_CASE("jacobi svd of the zero matrix completes orthogonal factors") {
  DenseMatrix c(3, 3);
  SvdFactors f = jacobi_svd(c);
  for (double s : f.s) CHECK(s == 0.0);
  CHECK(gram_identity_defect(f.u) < 1e-12);
  CHECK(gram_identity_defect(f.v) < 1e-12);
}

TEST_CASE("truncated svd of the identity") {
  std::vector<Triplet> trips{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
  auto a = SparseMatrix::from_triplets(3, trips, true);
  SvdFactors f = randomized_svd(a, 3, 7);
  REQUIRE(f.s.size() == 3);
  for (double s : f.s) CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_abs_diff(reconstruct(f), a.to_dense()) < 1e-10);
}

TEST_CASE("truncated svd recovers a diagonal spectrum exactly at full rank") {
  // rank(A) <= d: the single-pass sketch spans the whole range, so the
  // factorization is exact up to round-off.
  std::vector<Triplet> trips{{0, 0, 4.0}, {1, 1, 3.0}, {2, 2, 2.0}, {3, 3, 1.0}};
  auto a = SparseMatrix::from_triplets(4, trips, true);
  SvdFactors f = randomized_svd(a, 4, 5);
  REQUIRE(f.s.size() == 4);
  CHECK(f.s[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(f.s[1] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(f.s[2] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(f.s[3] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(max_abs_diff(reconstruct(f), a.to_dense()) < 1e-8);
}

TEST_CASE("truncated svd of diag(4,3,0,0) keeps the top two exactly") {
  // Same exactness clause via a rank-2 input at d = 2.
  std::vector<Triplet> trips{{0, 0, 4.0}, {1, 1, 3.0}};
  auto a = SparseMatrix::from_triplets(4, trips, true);
  SvdFactors f = randomized_svd(a, 2, 5);
  REQUIRE(f.s.size() == 2);
  CHECK(f.s[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(f.s[1] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(max_abs_diff(reconstruct(f), a.to_dense()) < 1e-8);
}

TEST_CASE("truncated svd of diag(4,3,2,1) at d=2 is quasi-optimal") {
  // rank(A) > d: a single-pass sketch cannot isolate the top-2 subspace
  // exactly -- the discarded tail bleeds into the 2-dimensional range
  // estimate.  What the method does guarantee: estimates never exceed the
  // true values (projections only shrink singular values) and the
  // reconstruction is within a small constant of the best rank-2 error.
  std::vector<Triplet> trips{{0, 0, 4.0}, {1, 1, 3.0}, {2, 2, 2.0}, {3, 3, 1.0}};
  auto a = SparseMatrix::from_triplets(4, trips, true);
  const double best_rank2 = std::sqrt(2.0 * 2.0 + 1.0 * 1.0);  // ||diag(0,0,2,1)||_F
  for (std::uint64_t seed : {5ull, 17ull, 91ull}) {
    SvdFactors f = randomized_svd(a, 2, seed);
    REQUIRE(f.s.size() == 2);
    CHECK(f.s[0] >= f.s[1]);
    CHECK(f.s[0] <= 4.0 + 1e-12);
    CHECK(f.s[1] <= 3.0 + 1e-12);
    CHECK(f.s[0] > 2.0);  // dominant direction caught well above the tail
    const auto err = [&] {
      DenseMatrix r = reconstruct(f);
      double sq = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
          const double d = r(i, j) - (i == j ? trips[i].value : 0.0);
          sq += d * d;
        }
      return std::sqrt(sq);
    }();
    CHECK(err <= 3.0 * best_rank2);
  }
}

TEST_CASE("truncated svd of a rank-one outer product") {
  // x = (1,2,2): the single singular value is |x|^2 = 9.
  const double x[3] = {1.0, 2.0, 2.0};
  std::vector<Triplet> trips;
  for (VertexId i = 0; i < 3; ++i)
    for (VertexId j = 0; j < 3; ++j) trips.push_back({i, j, x[i] * x[j]});
  auto a = SparseMatrix::from_triplets(3, trips, true);
  SvdFactors f = randomized_svd(a, 3, 11);
  REQUIRE(f.s.size() == 3);
  CHECK(f.s[0] == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(std::abs(f.s[1]) < 1e-8);
  CHECK(std::abs(f.s[2]) < 1e-8);
  CHECK(max_abs_diff(reconstruct(f), a.to_dense()) < 1e-8);
}

TEST_CASE("truncated svd recovers a known low-rank spectrum exactly") {
  std::vector<double> lam;
  auto a = low_rank_symmetric(50, 5, 99, &lam);
  SvdFactors f = randomized_svd(a, 8, 123);
  REQUIRE(f.s.size() == 8);
  for (std::size_t k = 0; k < lam.size(); ++k)
    CHECK(f.s[k] == doctest::Approx(lam[k]).epsilon(1e-9));
  for (std::size_t k = lam.size(); k < 8; ++k) CHECK(std::abs(f.s[k]) < 1e-9);
  CHECK(rel_frobenius_error(reconstruct(f), a.to_dense()) < 1e-10);
}

TEST_CASE("truncated svd top value on a decaying spectrum") {
  std::vector<double> lam;
  auto a = decaying_symmetric(60, 0.7, 4, &lam);
  SvdFactors f = randomized_svd(a, 10, 21);
  CHECK(f.s[0] == doctest::Approx(lam[0]).epsilon(0.05));
}

TEST_CASE("truncated svd is deterministic per seed") {
  auto a = low_rank_symmetric(40, 6, 2, nullptr);
  SvdFactors f1 = randomized_svd(a, 8, 77);
  SvdFactors f2 = randomized_svd(a, 8, 77);
  CHECK(f1.u == f2.u);
  CHECK(f1.s == f2.s);
  CHECK(f1.v == f2.v);
}

TEST_CASE("truncated svd input validation") {
  std::vector<Triplet> asym{{0, 1, 1.0}};
  auto bad = SparseMatrix::from_triplets(2, asym, false);
  CHECK_THROWS_AS(randomized_svd(bad, 1, 1), ParamError);

  std::vector<Triplet> trips{{0, 0, 1.0}, {1, 1, 1.0}};
  auto a = SparseMatrix::from_triplets(2, trips, true);
  CHECK_THROWS_AS(randomized_svd(a, 3, 1), ParamError);  // d exceeds n
  CHECK_THROWS_AS(randomized_svd(a, 0, 1), ParamError);

  // An all-zero matrix has no scale to work with.
  auto zero = SparseMatrix::from_triplets(2, {}, true);
  CHECK_THROWS_AS(randomized_svd(zero, 2, 1), NumericalError);
}

TEST_CASE("embedding scales factor columns by root singular values") {
  DenseMatrix u(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  DenseMatrix e = embed(u, {4.0, 1.0});
  CHECK(e(0, 0) == doctest::Approx(2.0));
  CHECK(e(0, 1) == doctest::Approx(0.0));
  CHECK(e(1, 0) == doctest::Approx(0.0));
  CHECK(e(1, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(embed(u, {1.0, -0.5}), ParamError);
}

TEST_CASE("scree data pairs ranks with values") {
  auto rows = scree_data({3.0, 2.0, 1.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first == 1);
  CHECK(rows[0].second == doctest::Approx(3.0));
  CHECK(rows[2].first == 3);
  CHECK(rows[2].second == doctest::Approx(1.0));
  CHECK(scree_data({}).empty());
  CHECK_THROWS_AS(scree_data({1.0, 2.0}), ParamError);
}
