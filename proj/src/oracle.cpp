#include "sparsene/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "sparsene/errors.hpp"
#include "sparsene/sparsifier.hpp"

namespace sparsene {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd to_eigen(const DenseSymmetric& m) {
  return Eigen::Map<const EigenRowMajor>(m.values().data(), m.n(), m.n());
}

DenseSymmetric from_eigen_symmetrized(const Eigen::MatrixXd& m) {
  DenseSymmetric out(VertexId(m.rows()));
  for (VertexId i = 0; i < out.n(); ++i)
    for (VertexId j = i; j < out.n(); ++j)
      out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return out;
}

void check_cap(const Graph& g, VertexId cap) {
  if (g.n() > cap)
    throw SizeError("graph exceeds the dense reference cap of " +
                    std::to_string(cap) + " vertices");
}

Eigen::MatrixXd dense_adjacency(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = e.w;
    a(e.v, e.u) = e.w;
  }
  return a;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_regime(double eps) {
  if (eps < 0.0) throw ParamError("epsilon must be nonnegative");
  if (eps >= 0.5)
    throw RegimeError("epsilon " + fmt(eps) +
                      " is outside the guarantee regime (< 0.5)");
}

// Eigen-decomposes a candidate Laplacian and verifies it looks like one of
// a connected graph: PSD with a one-dimensional null space spanned by the
// all-ones vector.
struct LaplacianEigen {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  double tol;
};

LaplacianEigen decompose_connected_laplacian(const Eigen::MatrixXd& l,
                                             const char* which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double tol = 1e-10 * std::max(scale, 1.0);
  if (ev(0) < -tol)
    throw IncomparableError(std::string(which) +
                            " matrix is not positive semidefinite");
  int null_dim = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= tol) ++null_dim;
  if (null_dim != 1)
    throw IncomparableError(std::string(which) + " matrix null space has " +
                            std::to_string(null_dim) +
                            " dimensions; need exactly 1 (connected graph)");
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(l.rows()) / std::sqrt(double(l.rows()));
  if (std::abs(es.eigenvectors().col(0).dot(ones)) < 1.0 - 1e-6)
    throw IncomparableError(std::string(which) +
                            " matrix null space is not the all-ones vector");
  return {es.eigenvectors(), es.eigenvalues(), tol};
}

}  // namespace

double DenseSymmetric::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double DenseSymmetric::symmetry_defect() const {
  double worst = 0.0;
  for (VertexId i = 0; i < n_; ++i)
    for (VertexId j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

DenseSymmetric to_dense_symmetric(const SparseMatrix& a) {
  DenseSymmetric out(a.n());
  for (const Triplet& t : a.entries())
    if (t.row <= t.col) out.set(t.row, t.col, t.value);
  return out;
}

DenseSymmetric exact_walk_matrix(const Graph& g, std::uint32_t window,
                                 VertexId cap) {
  check_cap(g, cap);
  if (window < 1) throw ParamError("window must be >= 1");
  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::VectorXd dinv(g.n());
  for (VertexId v = 0; v < g.n(); ++v) dinv(v) = 1.0 / g.degree(v);
  const Eigen::MatrixXd p = dinv.asDiagonal() * a;  // D⁻¹A

  Eigen::MatrixXd power = p;
  Eigen::MatrixXd acc = p;
  for (std::uint32_t r = 2; r <= window; ++r) {
    power = power * p;
    acc += power;
  }
  const Eigen::MatrixXd m =
      (acc * dinv.asDiagonal()) / double(window);
  return from_eigen_symmetrized(m);
}

DenseSymmetric exact_ppmi_matrix(const Graph& g, std::uint32_t window,
                                 double b, VertexId cap) {
  if (!(b > 0.0)) throw ParamError("negative-sample count must be > 0");
  DenseSymmetric m = exact_walk_matrix(g, window, cap);
  const double scale = g.volume() / b;
  for (double& v : m.values()) v = trunc_log(scale * v);
  return m;
}

LogMatrixDiagnostic exact_log_matrix(const Graph& g, std::uint32_t window,
                                     double b, VertexId cap) {
  if (!(b > 0.0)) throw ParamError("negative-sample count must be > 0");
  LogMatrixDiagnostic out;
  out.values = exact_walk_matrix(g, window, cap);
  out.undefined.assign(out.values.values().size(), 0);
  const double scale = g.volume() / b;
  auto& vals = out.values.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double arg = scale * vals[i];
    if (arg > 0.0) {
      vals[i] = std::log(arg);
    } else {
      vals[i] = 0.0;
      out.undefined[i] = 1;
      ++out.undefined_count;
    }
  }
  return out;
}

DenseSymmetric exact_walk_laplacian(const Graph& g,
                                    const std::vector<double>& alpha,
                                    VertexId cap) {
  check_cap(g, cap);
  if (alpha.empty()) throw ParamError("alpha must be non-empty");
  double sum = 0.0;
  for (double a : alpha) {
    if (a < 0.0) throw ParamError("alpha entries must be nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ParamError("alpha must sum to 1");

  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::VectorXd deg(g.n()), dinv(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    deg(v) = g.degree(v);
    dinv(v) = 1.0 / g.degree(v);
  }
  const Eigen::MatrixXd p = dinv.asDiagonal() * a;

  // D(D⁻¹A)^r = A(D⁻¹A)^(r-1); accumulate alpha-weighted powers.
  Eigen::MatrixXd term = a;
  Eigen::MatrixXd acc = alpha[0] * term;
  for (std::size_t r = 1; r < alpha.size(); ++r) {
    term = term * p;
    acc += alpha[r] * term;
  }
  Eigen::MatrixXd l = -acc;
  l.diagonal() += deg;
  return from_eigen_symmetrized(l);
}

DenseSymmetric walk_matrix_from_laplacian(const Graph& g,
                                          const DenseSymmetric& l) {
  if (l.n() != g.n()) throw ParamError("dimension mismatch");
  DenseSymmetric out(g.n());
  for (VertexId i = 0; i < g.n(); ++i) {
    for (VertexId j = i; j < g.n(); ++j) {
      const double id = i == j ? g.degree(i) : 0.0;
      out.set(i, j, (id - l(i, j)) / (g.degree(i) * g.degree(j)));
    }
  }
  return out;
}

double path_probability(const Graph& g, const std::vector<VertexId>& path) {
  if (path.size() < 2) throw ParamError("path needs at least one edge");
  double weight_product = 1.0;
  double z = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double w = g.edge_weight(path[i], path[i + 1]);
    if (w == 0.0)
      throw ParamError("path vertices " + std::to_string(path[i]) + " and " +
                       std::to_string(path[i + 1]) + " are not adjacent");
    weight_product *= w;
    z += 2.0 / w;
  }
  double interior_degrees = 1.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    interior_degrees *= g.degree(path[i]);
  const double r = double(path.size() - 1);
  return (weight_product / interior_degrees) * z /
         (2.0 * r * double(g.edge_count()));
}

std::vector<PathClass> enumerate_path_distribution(const Graph& g,
                                                   std::uint32_t r) {
  if (r < 1) throw ParamError("path length must be >= 1");
  std::map<std::vector<VertexId>, double> classes;
  std::vector<VertexId> walk;

  auto visit = [&](auto&& self, VertexId at) -> void {
    if (walk.size() == std::size_t(r) + 1) {
      std::vector<VertexId> rev(walk.rbegin(), walk.rend());
      if (rev < walk) return;  // count each class from its canonical side
      // A walk equal to its own reversal has a single orientation and is
      // drawn half as often as a two-orientation class.
      const double mass =
          rev == walk ? 0.5 * path_probability(g, walk) : path_probability(g, walk);
      classes[walk] += mass;
      return;
    }
    const auto nbrs = g.neighbors(at);
    for (std::size_t i = 0; i < nbrs.size; ++i) {
      walk.push_back(nbrs.ids[i]);
      self(self, nbrs.ids[i]);
      walk.pop_back();
    }
  };
  for (VertexId v = 0; v < g.n(); ++v) {
    walk.assign(1, v);
    visit(visit, v);
  }

  std::vector<PathClass> out;
  out.reserve(classes.size());
  for (auto& [path, prob] : classes) out.push_back({path, prob});
  return out;
}

double measure_epsilon(const DenseSymmetric& ltilde, const DenseSymmetric& l) {
  if (ltilde.n() != l.n()) throw ParamError("dimension mismatch");
  if (ltilde.n() < 2) throw ParamError("need at least two vertices");
  const Eigen::MatrixXd lt = to_eigen(ltilde);
  const Eigen::MatrixXd le = to_eigen(l);

  const LaplacianEigen et = decompose_connected_laplacian(lt, "sampled");
  decompose_connected_laplacian(le, "reference");

  // Whiten with the pseudo-inverse square root of L̃; the generalized
  // eigenvalues of (L, L̃) on the complement of ones are the eigenvalues
  // of Φ L Φ after discarding the ones direction's zero.
  const int n = int(ltilde.n());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (et.values(i) <= et.tol) continue;
    phi += et.vectors.col(i) * et.vectors.col(i).transpose() /
           std::sqrt(et.values(i));
  }
  const Eigen::MatrixXd s = phi * le * phi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Eigen::MatrixXd(0.5 * (s + s.transpose())));
  const Eigen::VectorXd& ev = es.eigenvalues();

  // Drop the single eigenvalue closest to zero (the shared null
  // direction), then read the extremes.
  int drop = 0;
  for (int i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) < std::abs(ev(drop))) drop = i;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (i == drop) continue;
    lo = std::min(lo, ev(i));
    hi = std::max(hi, ev(i));
  }
  return std::max({hi - 1.0, 1.0 - lo, 0.0});
}

std::string BoundReport::table() const {
  std::string out;
  if (!rows.empty()) {
    out += "index\tsigma\tbound\tmargin\n";
    for (const BoundRow& r : rows)
      out += std::to_string(r.index) + "\t" + fmt(r.sigma) + "\t" +
             fmt(r.bound) + "\t" + fmt(r.margin) + "\n";
  } else {
    out += "lhs\tbound\tmargin\n";
    out += fmt(lhs) + "\t" + fmt(rhs) + "\t" + fmt(rhs - lhs) + "\n";
  }
  return out;
}

std::string BoundReport::summary() const {
  if (pass) return "PASS";
  return "FAIL epsilon=" + fmt(epsilon) + " worst_margin=" + fmt(worst_margin);
}

BoundReport check_singular_bound(const DenseSymmetric& mtilde,
                                 const DenseSymmetric& m, double eps,
                                 const Graph& g) {
  check_regime(eps);
  if (mtilde.n() != m.n() || m.n() != g.n())
    throw ParamError("dimension mismatch");

  const Eigen::MatrixXd delta = to_eigen(mtilde) - to_eigen(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta,
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> sigma(g.n());
  for (VertexId i = 0; i < g.n(); ++i) sigma[i] = std::abs(es.eigenvalues()(i));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());

  std::vector<double> deg = g.degrees();
  std::sort(deg.begin(), deg.end());  // ascending, paired with descending sigma
  const double dmin = deg.front();

  BoundReport rep;
  rep.epsilon = eps;
  rep.pass = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (VertexId i = 0; i < g.n(); ++i) {
    const double bound = 4.0 * eps / std::sqrt(deg[i] * dmin);
    const double margin = bound - sigma[i];
    rep.rows.push_back({i + 1, sigma[i], bound, margin});
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (sigma[i] > bound + 1e-12) rep.pass = false;
  }
  return rep;
}

BoundReport check_frobenius_bound(const Graph& g, const DenseSymmetric& ltilde,
                                  const DenseSymmetric& l, double eps,
                                  double b) {
  check_regime(eps);
  if (!(b > 0.0)) throw ParamError("negative-sample count must be > 0");
  if (ltilde.n() != g.n() || l.n() != g.n())
    throw ParamError("dimension mismatch");

  const double scale = g.volume() / b;
  const VertexId n = g.n();
  double lhs_sq = 0.0;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = 0; j < n; ++j) {
      const double di = g.degree(i), dj = g.degree(j);
      const double id = i == j ? di : 0.0;
      const double mt = (id - ltilde(i, j)) / (di * dj);
      const double me = (id - l(i, j)) / (di * dj);
      const double diff = trunc_log(scale * mt) - trunc_log(scale * me);
      lhs_sq += diff * diff;
    }
  }

  double inv_deg_sum = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (VertexId i = 0; i < n; ++i) {
    inv_deg_sum += 1.0 / g.degree(i);
    dmin = std::min(dmin, g.degree(i));
  }

  BoundReport rep;
  rep.epsilon = eps;
  rep.lhs = std::sqrt(lhs_sq);
  rep.rhs = 4.0 * eps * g.volume() / (b * std::sqrt(dmin)) *
            std::sqrt(inv_deg_sum);
  rep.worst_margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + 1e-12;
  return rep;
}

std::string UnbiasednessReport::summary() const {
  return "relative_frobenius=" + fmt(relative_error) +
         " trials=" + std::to_string(trials) +
         " samples_per_trial=" + std::to_string(samples_per_trial);
}

UnbiasednessReport monte_carlo_unbiasedness(const Graph& g,
                                            std::uint32_t window,
                                            std::uint64_t samples,
                                            std::uint32_t trials,
                                            std::uint64_t seed,
                                            std::uint32_t threads) {
  if (trials < 1) throw ParamError("trials must be >= 1");
  const std::vector<double> alpha(window, 1.0 / double(window));
  const DenseSymmetric exact = exact_walk_laplacian(g, alpha);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (std::uint32_t t = 0; t < trials; ++t) {
    PipelineConfig cfg;
    cfg.window = window;
    cfg.samples = samples;
    cfg.seed = mix_seed(seed, 0xA000 + t);
    cfg.threads = threads;
    cfg.weighted = g.weighted();
    const SparsifierAccumulator acc = build_sparsifier(g, cfg);
    for (const Triplet& p : acc.sorted_pairs()) {
      sum(p.row, p.col) -= p.value;
      sum(p.col, p.row) -= p.value;
      sum(p.row, p.row) += p.value;
      sum(p.col, p.col) += p.value;
    }
  }
  sum /= double(trials);

  const Eigen::MatrixXd exact_e = to_eigen(exact);
  UnbiasednessReport rep;
  rep.relative_error = (sum - exact_e).norm() / exact_e.norm();
  rep.trials = trials;
  rep.samples_per_trial = samples;
  return rep;
}

}  // namespace sparsene
