#include <doctest.h>

#include <sparsene/errors.hpp>
#include <sparsene/oracle.hpp>
#include <sparsene/sparsifier.hpp>

#include "support/chisq.hpp"
#include "support/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

using namespace sparsene;
using namespace testsupport;

namespace {

DenseSymmetric scaled(const DenseSymmetric& a, double c) {
  DenseSymmetric out(a.n());
  for (VertexId i = 0; i < a.n(); ++i)
    for (VertexId j = i; j < a.n(); ++j) out.set(i, j, c * a(i, j));
  return out;
}

double rel_frobenius(const DenseSymmetric& a, const DenseSymmetric& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    const double d = a.values()[k] - b.values()[k];
    num += d * d;
    den += b.values()[k] * b.values()[k];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("dense symmetric container") {
  DenseSymmetric a(3);
  a.set(0, 1, 2.0);
  a.set(2, 2, -1.0);
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(2, 2) == -1.0);
  CHECK(a.symmetry_defect() == 0.0);
  CHECK(a.frobenius_norm() == doctest::Approx(3.0));  // sqrt(4+4+1)
}

TEST_CASE("sparse to dense symmetric round trip") {
  auto lap = laplacian_from_pairs({{0, 1, 1.0}, {1, 2, 2.0}}, 3);
  DenseSymmetric d = to_dense_symmetric(lap);
  CHECK(d(0, 0) == doctest::Approx(1.0));
  CHECK(d(1, 1) == doctest::Approx(3.0));
  CHECK(d(0, 1) == doctest::Approx(-1.0));
  CHECK(d(1, 2) == doctest::Approx(-2.0));
  CHECK(d(0, 2) == 0.0);
}

TEST_CASE("walk matrix on the triangle, window 1") {
  DenseSymmetric m = exact_walk_matrix(triangle(), 1);
  for (VertexId i = 0; i < 3; ++i) {
    for (VertexId j = 0; j < 3; ++j) {
      const double want = i == j ? 0.0 : 0.25;
      CHECK(m(i, j) == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("walk matrix on the triangle, window 2") {
  DenseSymmetric m = exact_walk_matrix(triangle(), 2);
  CHECK(m(0, 1) == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(m(0, 0) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("walk matrix on the 3-path, window 1") {
  DenseSymmetric m = exact_walk_matrix(path3(), 1);
  CHECK(m(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m(1, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m(0, 2) == doctest::Approx(0.0));
  CHECK(m(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("log similarity matrix closed forms") {
  DenseSymmetric p1 = exact_ppmi_matrix(triangle(), 1, 1.0);
  CHECK(p1(0, 1) == doctest::Approx(0.4054651081081644).epsilon(1e-14));
  CHECK(p1(0, 0) == 0.0);

  DenseSymmetric p2 = exact_ppmi_matrix(triangle(), 2, 1.0);
  CHECK(p2(0, 1) == doctest::Approx(0.11778303565638346).epsilon(1e-13));
  CHECK(p2(0, 0) == 0.0);  // argument 0.75 < 1 truncates

  DenseSymmetric p3 = exact_ppmi_matrix(path3(), 1, 1.0);
  CHECK(p3(0, 1) == doctest::Approx(0.6931471805599453).epsilon(1e-14));
  CHECK(p3(0, 2) == 0.0);
}

TEST_CASE("untruncated log diagnostic flags nonpositive arguments") {
  LogMatrixDiagnostic diag = exact_log_matrix(triangle(), 1, 1.0);
  CHECK(diag.undefined_count == 3);  // the three zero diagonal entries
  for (VertexId i = 0; i < 3; ++i) {
    CHECK(diag.undefined[std::size_t(i) * 3 + i] == 1);
    CHECK(diag.values(i, i) == 0.0);
  }
  CHECK(diag.undefined[1] == 0);
  CHECK(diag.values(0, 1) == doctest::Approx(0.4054651081081644).epsilon(1e-14));
}

TEST_CASE("walk-polynomial laplacian closed forms") {
  DenseSymmetric l1 = exact_walk_laplacian(triangle(), {1.0});
  for (VertexId i = 0; i < 3; ++i)
    for (VertexId j = 0; j < 3; ++j)
      CHECK(l1(i, j) == doctest::Approx(i == j ? 2.0 : -1.0).epsilon(1e-14));

  DenseSymmetric l2 = exact_walk_laplacian(triangle(), {0.5, 0.5});
  CHECK(l2(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(l2(0, 1) == doctest::Approx(-0.75).epsilon(1e-14));

  CHECK_THROWS_AS(exact_walk_laplacian(triangle(), {0.5, 0.4}), ParamError);
  CHECK_THROWS_AS(exact_walk_laplacian(triangle(), {1.5, -0.5}), ParamError);
  CHECK_THROWS_AS(exact_walk_laplacian(triangle(), {}), ParamError);
}

TEST_CASE("walk matrix equals the laplacian-derived form") {
  // The two dense routes (direct power sum, and degree-conjugated
  // Laplacian complement) must agree to round-off on arbitrary graphs.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = random_connected(18, 0.2, seed, seed % 2 == 0);
    for (std::uint32_t window : {1u, 3u}) {
      DenseSymmetric m = exact_walk_matrix(g, window);
      std::vector<double> alpha(window, 1.0 / window);
      DenseSymmetric l = exact_walk_laplacian(g, alpha);
      DenseSymmetric m2 = walk_matrix_from_laplacian(g, l);
      CHECK(rel_frobenius(m2, m) < 1e-12);
    }
  }
}

TEST_CASE("dense routines enforce the size cap") {
  CHECK_THROWS_AS(exact_walk_matrix(triangle(), 1, 2), SizeError);
  CHECK_THROWS_AS(exact_ppmi_matrix(triangle(), 1, 1.0, 2), SizeError);
  CHECK_THROWS_AS(exact_walk_laplacian(triangle(), {1.0}, 2), SizeError);
}

TEST_CASE("path probability closed forms") {
  Graph tri = triangle();
  CHECK(path_probability(tri, {0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(path_probability(tri, {0, 1, 2}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  Graph wtri = weighted_triangle();
  // Edge 0-1 has weight 2 in total weight 4: w=2, Z=1, 2rm=6 -> 1/3.
  CHECK(path_probability(wtri, {0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(path_probability(path3(), {0, 2}), ParamError);
  CHECK_THROWS_AS(path_probability(tri, {0}), ParamError);
}

TEST_CASE("path class enumeration on the 3-path, length 2") {
  // Hand enumeration: five reversal classes. Palindromic sequences carry
  // half the mass of the two-orientation classes.
  auto classes = enumerate_path_distribution(path3(), 2);
  REQUIRE(classes.size() == 5);
  std::map<std::vector<VertexId>, double> got;
  for (const auto& c : classes) got[c.path] = c.probability;
  CHECK(got.at({0, 1, 0}) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(got.at({0, 1, 2}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(got.at({1, 0, 1}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(got.at({1, 2, 1}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(got.at({2, 1, 2}) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("path class probabilities sum to one") {
  for (std::uint32_t r = 1; r <= 4; ++r) {
    for (const Graph& g : {triangle(), weighted_triangle(), path4()}) {
      auto classes = enumerate_path_distribution(g, r);
      double total = 0.0;
      for (const auto& c : classes) {
        CHECK(c.probability > 0.0);
        // Canonical representative: not above its own reversal.
        std::vector<VertexId> rev(c.path.rbegin(), c.path.rend());
        CHECK_FALSE(std::lexicographical_compare(rev.begin(), rev.end(),
                                                 c.path.begin(), c.path.end()));
        total += c.probability;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("sampled paths follow the enumerated distribution") {
  for (const Graph& g : {triangle(), weighted_triangle()}) {
    const std::uint32_t r = 2;
    auto classes = enumerate_path_distribution(g, r);
    std::map<std::vector<VertexId>, std::size_t> index;
    std::vector<double> probs;
    for (const auto& c : classes) {
      index[c.path] = probs.size();
      probs.push_back(c.probability);
    }
    Rng rng(2024);
    const auto& edges = g.edges();
    const int draws = 100000;
    std::vector<double> observed(probs.size(), 0.0);
    for (int i = 0; i < draws; ++i) {
      const Edge& e = edges[rng.next_index(edges.size())];
      std::vector<VertexId> trace;
      path_sampling_traced(g, e, r, rng, trace);
      std::vector<VertexId> rev(trace.rbegin(), trace.rend());
      if (std::lexicographical_compare(rev.begin(), rev.end(), trace.begin(), trace.end()))
        trace = rev;
      auto it = index.find(trace);
      REQUIRE(it != index.end());
      observed[it->second] += 1.0;
    }
    const double stat = pearson_statistic(observed, probs, draws);
    const double p = chi_square_sf(stat, int(probs.size()) - 1);
    CHECK(p > 0.001);
  }
}

TEST_CASE("epsilon measurement on scaled laplacians") {
  DenseSymmetric l = exact_walk_laplacian(triangle(), {0.5, 0.5});
  CHECK(measure_epsilon(l, l) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(measure_epsilon(scaled(l, 1.1), l) == doctest::Approx(1.0 - 1.0 / 1.1).epsilon(1e-9));
  CHECK(measure_epsilon(scaled(l, 0.8), l) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("epsilon measurement rejects non-laplacians") {
  DenseSymmetric l = exact_walk_laplacian(triangle(), {1.0});

  // Two disjoint edges: null space has dimension 2.
  DenseSymmetric disc(4);
  disc.set(0, 0, 1.0);
  disc.set(1, 1, 1.0);
  disc.set(0, 1, -1.0);
  disc.set(2, 2, 1.0);
  disc.set(3, 3, 1.0);
  disc.set(2, 3, -1.0);
  CHECK_THROWS_AS(measure_epsilon(disc, disc), IncomparableError);

  // Negated Laplacian is not positive semidefinite.
  CHECK_THROWS_AS(measure_epsilon(scaled(l, -1.0), l), IncomparableError);

  // Null vector exists but is not the all-ones direction.
  DenseSymmetric skew(2);
  const double s = std::sqrt(2.0);
  skew.set(0, 0, 1.0);
  skew.set(1, 1, 2.0);
  skew.set(0, 1, -s);
  CHECK_THROWS_AS(measure_epsilon(skew, skew), IncomparableError);
}

TEST_CASE("singular value bound check on a scaled instance") {
  Graph g = triangle();
  DenseSymmetric l = exact_walk_laplacian(g, {1.0});
  DenseSymmetric lt = scaled(l, 1.1);
  const double eps = measure_epsilon(lt, l);
  CHECK(eps == doctest::Approx(1.0 - 1.0 / 1.1).epsilon(1e-9));

  DenseSymmetric m = walk_matrix_from_laplacian(g, l);
  DenseSymmetric mt = walk_matrix_from_laplacian(g, lt);
  BoundReport rep = check_singular_bound(mt, m, eps, g);
  CHECK(rep.pass);
  CHECK(rep.summary() == "PASS");
  REQUIRE(rep.rows.size() == 3);
  // Difference spectrum is 0.1/4 times {3,3,0}; every bound is 2*eps.
  CHECK(rep.rows[0].sigma == doctest::Approx(0.075).epsilon(1e-10));
  CHECK(rep.rows[1].sigma == doctest::Approx(0.075).epsilon(1e-10));
  CHECK(rep.rows[2].sigma == doctest::Approx(0.0).epsilon(1e-10));
  for (const auto& row : rep.rows)
    CHECK(row.bound == doctest::Approx(2.0 * eps).epsilon(1e-12));
  CHECK(rep.worst_margin == doctest::Approx(2.0 * eps - 0.075).epsilon(1e-9));
  CHECK_FALSE(rep.table().empty());
}

TEST_CASE("singular value bound check failure and regime guards") {
  Graph g = triangle();
  DenseSymmetric l = exact_walk_laplacian(g, {1.0});
  DenseSymmetric m = walk_matrix_from_laplacian(g, l);
  DenseSymmetric mt = walk_matrix_from_laplacian(g, scaled(l, 1.5));
  BoundReport rep = check_singular_bound(mt, m, 0.01, g);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_margin < 0.0);
  CHECK(rep.summary().rfind("FAIL epsilon=", 0) == 0);
  CHECK(rep.summary().find("worst_margin=") != std::string::npos);

  CHECK_THROWS_AS(check_singular_bound(mt, m, 0.6, g), RegimeError);
  CHECK_THROWS_AS(check_singular_bound(mt, m, -0.1, g), ParamError);
}

TEST_CASE("frobenius bound check on a scaled instance") {
  // Scaling the triangle's Laplacian by 1.1 shifts all six off-diagonal
  // log entries by log(1.1); the bound side has the closed form
  // 12*sqrt(3)/11 at eps = 1/11.
  Graph g = triangle();
  DenseSymmetric l = exact_walk_laplacian(g, {1.0});
  DenseSymmetric lt = scaled(l, 1.1);
  const double eps = measure_epsilon(lt, l);
  BoundReport rep = check_frobenius_bound(g, lt, l, eps, 1.0);
  CHECK(rep.pass);
  CHECK(rep.lhs == doctest::Approx(std::sqrt(6.0) * std::log(1.1)).epsilon(1e-9));
  CHECK(rep.rhs == doctest::Approx(12.0 * std::sqrt(3.0) / 11.0).epsilon(1e-9));
  CHECK(rep.summary() == "PASS");

  // A dishonest epsilon makes the certified radius collapse.
  BoundReport fail = check_frobenius_bound(g, lt, l, 1e-4, 1.0);
  CHECK_FALSE(fail.pass);
  CHECK(fail.summary().rfind("FAIL", 0) == 0);
}

TEST_CASE("monte carlo unbiasedness on the triangle") {
  UnbiasednessReport rep = monte_carlo_unbiasedness(triangle(), 1, 20000, 5, 31);
  CHECK(rep.trials == 5);
  CHECK(rep.samples_per_trial == 20000);
  CHECK(rep.relative_error < 0.05);
  CHECK(rep.summary().find("relative_frobenius=") != std::string::npos);
}
