#include "sparsene/sparsifier.hpp"

#include <algorithm>
#include <cmath>

#include "sparsene/errors.hpp"
#include "sparsene/parallel.hpp"

namespace sparsene {

namespace {

constexpr std::uint64_t kMaxSamples = std::uint64_t(1) << 48;

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(a) << 32) | b;
}

// Stream tag separating sampling workers from any other consumer of the
// same user seed.
constexpr std::uint64_t kSamplerStream = 0x73616d706c657221ULL;

}  // namespace

void PipelineConfig::validate() const {
  if (window < 1) throw ParamError("window must be >= 1");
  if (dim < 1) throw ParamError("dim must be >= 1");
  if (!(negative > 0.0)) throw ParamError("negative must be > 0");
  if (threads < 1) throw ParamError("threads must be >= 1");
  if (samples == 0 && !(multiplier > 0.0))
    throw ParamError("either samples or multiplier must be set");
  if (samples != 0 && multiplier > 0.0)
    throw ParamError("samples and multiplier are mutually exclusive");
  if (!alpha.empty()) {
    if (alpha.size() != window)
      throw ParamError("alpha must have one entry per window length");
    double sum = 0.0;
    for (double a : alpha) {
      if (a < 0.0) throw ParamError("alpha entries must be nonnegative");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ParamError("alpha must sum to 1");
  }
}

std::uint64_t PipelineConfig::resolve_samples(std::uint64_t edge_count) const {
  std::uint64_t m = samples;
  if (m == 0) {
    const double v = multiplier * double(window) * double(edge_count);
    if (!(v >= 1.0)) throw ParamError("resolved sample count is zero");
    if (v > double(kMaxSamples))
      throw ResourceError("sample count exceeds accumulator capacity");
    m = std::uint64_t(std::llround(v));
  }
  if (m < 1) throw ParamError("samples must be >= 1");
  if (m > kMaxSamples)
    throw ResourceError("sample count exceeds accumulator capacity");
  return m;
}

void SparsifierAccumulator::add(VertexId a, VertexId b, double weight) {
  ++samples_;
  if (a == b) {
    ++dropped_;
    return;
  }
  pairs_[pair_key(a, b)] += weight;
}

void SparsifierAccumulator::merge(SparsifierAccumulator&& other) {
  if (pairs_.size() < other.pairs_.size()) pairs_.swap(other.pairs_);
  for (const auto& [key, w] : other.pairs_) pairs_[key] += w;
  samples_ += other.samples_;
  dropped_ += other.dropped_;
  other.pairs_.clear();
  other.samples_ = other.dropped_ = 0;
}

double SparsifierAccumulator::total_weight() const {
  // Summed in canonical order so the figure is reproducible.
  double sum = 0.0;
  for (const Triplet& t : sorted_pairs()) sum += t.value;
  return sum;
}

std::vector<Triplet> SparsifierAccumulator::sorted_pairs() const {
  std::vector<Triplet> out;
  out.reserve(pairs_.size());
  for (const auto& [key, w] : pairs_)
    out.push_back({VertexId(key >> 32), VertexId(key & 0xffffffffu), w});
  std::sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

PathSample path_sampling(const Graph& g, const Edge& e, std::uint32_t r,
                         Rng& rng) {
  // k splits the r edges around e: k-1 walked from u, r-k walked from v.
  const std::uint32_t k = 1 + std::uint32_t(rng.next_index(r));
  const auto left = g.random_walk_with_cost(e.u, k - 1, rng);
  const auto right = g.random_walk_with_cost(e.v, r - k, rng);
  const double z = 2.0 / e.w + left.cost + right.cost;
  return {left.endpoint, right.endpoint, z, r};
}

PathSample path_sampling_traced(const Graph& g, const Edge& e, std::uint32_t r,
                                Rng& rng, std::vector<VertexId>& trace) {
  const std::uint32_t k = 1 + std::uint32_t(rng.next_index(r));
  std::vector<VertexId> left_walk, right_walk;
  const auto left = g.random_walk_with_cost(e.u, k - 1, rng, &left_walk);
  const auto right = g.random_walk_with_cost(e.v, r - k, rng, &right_walk);
  trace.clear();
  trace.reserve(std::size_t(r) + 1);
  // Full path runs from the far end of the u-side walk through (u, v) to
  // the far end of the v-side walk.
  for (auto it = left_walk.rbegin(); it != left_walk.rend(); ++it)
    trace.push_back(*it);
  trace.push_back(e.u);
  trace.push_back(e.v);
  for (VertexId x : right_walk) trace.push_back(x);
  const double z = 2.0 / e.w + left.cost + right.cost;
  return {left.endpoint, right.endpoint, z, r};
}

double per_sample_weight(const Graph& g, const PathSample& sample,
                         std::uint64_t total_samples) {
  if (!(sample.z > 0.0)) throw ParamError("path sample has non-positive cost");
  return 2.0 * double(sample.r) * double(g.edge_count()) /
         (double(total_samples) * sample.z);
}

SparsifierAccumulator build_sparsifier(const Graph& g,
                                       const PipelineConfig& cfg) {
  cfg.validate();
  const std::uint64_t total = cfg.resolve_samples(g.edge_count());
  const auto& edges = g.edges();
  const std::uint64_t m = edges.size();

  std::uint32_t workers = cfg.threads;
  if (workers > total) workers = std::uint32_t(total);
  std::vector<SparsifierAccumulator> parts(workers);
  parallel_chunks(total, workers,
                  [&](std::uint32_t w, std::uint64_t begin, std::uint64_t end) {
                    Rng rng(mix_seed(mix_seed(cfg.seed, kSamplerStream), w));
                    SparsifierAccumulator& acc = parts[w];
                    for (std::uint64_t i = begin; i < end; ++i) {
                      const Edge& e = edges[rng.next_index(m)];
                      const std::uint32_t r =
                          1 + std::uint32_t(rng.next_index(cfg.window));
                      const PathSample s = path_sampling(g, e, r, rng);
                      acc.add(s.u0, s.ur, per_sample_weight(g, s, total));
                    }
                  });
  SparsifierAccumulator out = std::move(parts[0]);
  for (std::uint32_t w = 1; w < workers; ++w) out.merge(std::move(parts[w]));
  return out;
}

SparseMatrix laplacian_from_pairs(const std::vector<Triplet>& pairs,
                                  VertexId n) {
  std::vector<double> diag(n, 0.0);
  std::vector<Triplet> triplets;
  triplets.reserve(pairs.size() * 2 + n);
  for (const Triplet& p : pairs) {
    if (!(p.value > 0.0)) throw ParamError("pair weight must be positive");
    triplets.push_back({p.row, p.col, -p.value});
    triplets.push_back({p.col, p.row, -p.value});
    diag[p.row] += p.value;
    diag[p.col] += p.value;
  }
  for (VertexId v = 0; v < n; ++v)
    if (diag[v] != 0.0) triplets.push_back({v, v, diag[v]});
  return SparseMatrix::from_triplets(n, std::move(triplets), true);
}

SparseMatrix laplacian_of(const SparsifierAccumulator& acc, VertexId n) {
  return laplacian_from_pairs(acc.sorted_pairs(), n);
}

double trunc_log(double x) { return x > 1.0 ? std::log(x) : 0.0; }

SparseMatrix ppmi_sparsifier(const Graph& g, const SparseMatrix& ltilde,
                             double b) {
  if (ltilde.n() != g.n())
    throw ParamError("laplacian dimension does not match graph");
  if (!(b > 0.0)) throw ParamError("negative-sample count must be > 0");
  const double scale = g.volume() / b;
  const auto& deg = g.degrees();

  // Diagonal of L̃ (zero where absent); the output pattern is L̃'s
  // off-diagonal pattern plus the full diagonal.
  std::vector<double> ldiag(g.n(), 0.0);
  for (const Triplet& t : ltilde.entries())
    if (t.row == t.col) ldiag[t.row] = t.value;

  std::vector<Triplet> out;
  out.reserve(ltilde.nnz() + g.n());
  for (const Triplet& t : ltilde.entries()) {
    if (t.row >= t.col) continue;  // handle each unordered pair once
    // (D - L̃) off-diagonal is -L̃_uv; divide by d_u d_v.
    const double entry = scale * (-t.value) / (deg[t.row] * deg[t.col]);
    const double v = trunc_log(entry);
    if (v != 0.0) {
      out.push_back({t.row, t.col, v});
      out.push_back({t.col, t.row, v});
    }
  }
  for (VertexId u = 0; u < g.n(); ++u) {
    const double entry = scale * (deg[u] - ldiag[u]) / (deg[u] * deg[u]);
    const double v = trunc_log(entry);
    if (v != 0.0) out.push_back({u, u, v});
  }
  return SparseMatrix::from_triplets(g.n(), std::move(out), true);
}

std::uint64_t suggest_sample_count(std::uint32_t window, std::uint64_t m,
                                   std::uint64_t n, double epsilon) {
  if (window < 1 || m < 1 || n < 1)
    throw ParamError("window, m, n must all be >= 1");
  if (!(epsilon > 0.0) || !(epsilon <= 0.5))
    throw ParamError("epsilon must lie in (0, 0.5]");
  const double v = std::ceil(double(window) * double(m) /
                             (epsilon * epsilon) * std::log(double(n)));
  if (v >= 9.2e18) throw ResourceError("suggested sample count overflows");
  return std::max<std::uint64_t>(1, std::uint64_t(v));
}

}  // namespace sparsene
