#include "sparsene/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "sparsene/errors.hpp"
#include "sparsene/parallel.hpp"
#include "sparsene/rng.hpp"

namespace sparsene {

namespace {

constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;

// log(1 + exp(-t)) without overflow.
double logistic_loss(double t) {
  return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

// d/dt log(1+exp(-t)) = -1/(1+exp(t)).
double logistic_slope(double t) { return -1.0 / (1.0 + std::exp(t)); }

struct LabelFit {
  std::vector<double> w;
  double b = 0.0;
  bool hit_cap = false;
};

// Full-batch gradient descent with Armijo backtracking on the
// L2-regularized logistic loss; the bias is left unregularized.
LabelFit fit_logistic(const DenseMatrix& emb,
                      const std::vector<VertexId>& train_ids,
                      const std::vector<signed char>& y, double reg) {
  const std::size_t d = emb.cols();
  const std::size_t nt = train_ids.size();
  LabelFit fit;
  fit.w.assign(d, 0.0);

  auto objective = [&](const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double* x = emb.row(train_ids[i]);
      double t = b;
      for (std::size_t j = 0; j < d; ++j) t += w[j] * x[j];
      loss += logistic_loss(double(y[i]) * t);
    }
    double wsq = 0.0;
    for (double v : w) wsq += v * v;
    return loss / double(nt) + 0.5 * reg * wsq;
  };

  std::vector<double> gw(d), wtrial(d);
  double step = 1.0;
  constexpr int kMaxIters = 5000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double* x = emb.row(train_ids[i]);
      double t = fit.b;
      for (std::size_t j = 0; j < d; ++j) t += fit.w[j] * x[j];
      const double coeff = double(y[i]) * logistic_slope(double(y[i]) * t);
      for (std::size_t j = 0; j < d; ++j) gw[j] += coeff * x[j];
      gb += coeff;
    }
    double gnorm_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      gw[j] = gw[j] / double(nt) + reg * fit.w[j];
      gnorm_sq += gw[j] * gw[j];
    }
    gb /= double(nt);
    gnorm_sq += gb * gb;
    if (std::sqrt(gnorm_sq) <= 1e-6) return fit;

    const double f0 = objective(fit.w, fit.b);
    step = std::min(step * 2.0, 1e4);
    bool accepted = false;
    for (int h = 0; h < 60; ++h) {
      for (std::size_t j = 0; j < d; ++j) wtrial[j] = fit.w[j] - step * gw[j];
      const double btrial = fit.b - step * gb;
      if (objective(wtrial, btrial) <= f0 - 1e-4 * step * gnorm_sq) {
        fit.w.swap(wtrial);
        fit.b = btrial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Step size underflowed: no descent direction representable.
      fit.hit_cap = true;
      return fit;
    }
  }
  fit.hit_cap = true;
  return fit;
}

}  // namespace

std::vector<VertexId> LabelTable::labeled_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (!labels[v].empty()) out.push_back(VertexId(v));
  return out;
}

LabelTable parse_labels(std::istream& in, std::size_t n_vertices,
                        const std::unordered_map<std::uint64_t, VertexId>*
                            raw_to_dense) {
  std::vector<std::pair<VertexId, std::uint64_t>> pairs;
  std::set<std::uint64_t> raw_labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t vertex = 0, label = 0;
    std::string extra;
    if (!(ls >> vertex >> label) || (ls >> extra))
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'vertex_id label_id'");
    VertexId dense;
    if (raw_to_dense) {
      const auto it = raw_to_dense->find(vertex);
      if (it == raw_to_dense->end())
        throw ParseError("line " + std::to_string(line_no) + ": vertex " +
                         std::to_string(vertex) + " not in the vertex mapping");
      dense = it->second;
    } else {
      if (vertex >= n_vertices)
        throw ParseError("line " + std::to_string(line_no) + ": vertex " +
                         std::to_string(vertex) + " out of range");
      dense = VertexId(vertex);
    }
    if (dense >= n_vertices)
      throw ParseError("line " + std::to_string(line_no) +
                       ": mapped vertex out of range");
    pairs.emplace_back(dense, label);
    raw_labels.insert(label);
  }

  std::map<std::uint64_t, std::uint32_t> to_dense_label;
  std::uint32_t next = 0;
  for (std::uint64_t raw : raw_labels) to_dense_label[raw] = next++;

  LabelTable table;
  table.label_count = next;
  table.labels.assign(n_vertices, {});
  for (const auto& [vertex, raw] : pairs)
    table.labels[vertex].push_back(to_dense_label[raw]);
  for (auto& set : table.labels) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return table;
}

std::pair<std::vector<VertexId>, std::vector<VertexId>> split(
    const LabelTable& labels, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0) || !(train_ratio < 1.0))
    throw ParamError("train ratio must lie in (0, 1)");
  std::vector<VertexId> ids = labels.labeled_vertices();
  Rng rng(mix_seed(seed, kSplitStream));
  for (std::size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng.next_index(i)]);
  const std::size_t n_train =
      std::size_t(std::llround(train_ratio * double(ids.size())));
  if (n_train == 0 || n_train >= ids.size())
    throw ParamError("split leaves an empty train or test side");
  std::vector<VertexId> train(ids.begin(), ids.begin() + n_train);
  std::vector<VertexId> test(ids.begin() + n_train, ids.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

OvrModel train_ovr(const DenseMatrix& emb, const LabelTable& labels,
                   const std::vector<VertexId>& train_ids, double reg,
                   std::uint32_t threads) {
  if (train_ids.empty()) throw ParamError("empty training set");
  if (reg < 0.0) throw ParamError("regularization must be nonnegative");
  for (VertexId v : train_ids)
    if (v >= emb.rows() || v >= labels.labels.size())
      throw ParamError("training vertex out of range");

  OvrModel model;
  model.dim = emb.cols();
  model.reg = reg;
  model.weights.assign(labels.label_count, {});
  model.bias.assign(labels.label_count, 0.0);
  model.degenerate.assign(labels.label_count, 0);
  model.hit_iteration_cap.assign(labels.label_count, 0);

  parallel_for(labels.label_count, threads, [&](std::uint64_t label) {
    std::vector<signed char> y(train_ids.size());
    bool any_positive = false;
    for (std::size_t i = 0; i < train_ids.size(); ++i) {
      const auto& set = labels.labels[train_ids[i]];
      const bool has =
          std::binary_search(set.begin(), set.end(), std::uint32_t(label));
      y[i] = has ? 1 : -1;
      any_positive |= has;
    }
    if (!any_positive) {
      // No positive example: constant-negative scorer.
      model.weights[label].assign(emb.cols(), 0.0);
      model.bias[label] = -1e30;
      model.degenerate[label] = 1;
      return;
    }
    LabelFit fit = fit_logistic(emb, train_ids, y, reg);
    model.weights[label] = std::move(fit.w);
    model.bias[label] = fit.b;
    model.hit_iteration_cap[label] = fit.hit_cap ? 1 : 0;
  });
  return model;
}

std::vector<std::uint32_t> predict_topk(const OvrModel& model,
                                        const double* row, std::uint32_t k) {
  const std::uint32_t n_labels = std::uint32_t(model.weights.size());
  k = std::min(k, n_labels);
  if (k == 0) return {};
  std::vector<double> scores(n_labels);
  for (std::uint32_t l = 0; l < n_labels; ++l) {
    double s = model.bias[l];
    const auto& w = model.weights[l];
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * row[j];
    scores[l] = s;
  }
  std::vector<std::uint32_t> order(n_labels);
  for (std::uint32_t l = 0; l < n_labels; ++l) order[l] = l;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;  // ties toward the lower label id
  });
  std::vector<std::uint32_t> out(order.begin(), order.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> micro_macro_f1(
    const std::vector<std::vector<std::uint32_t>>& pred,
    const std::vector<std::vector<std::uint32_t>>& truth) {
  if (pred.size() != truth.size())
    throw ParamError("prediction and truth cover different vertex sets");

  struct Counts {
    std::uint64_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::uint32_t, Counts> per_label;
  std::set<std::uint32_t> truth_labels;
  for (std::size_t v = 0; v < pred.size(); ++v) {
    const auto& p = pred[v];
    const auto& t = truth[v];
    for (std::uint32_t label : t) truth_labels.insert(label);
    for (std::uint32_t label : p)
      if (std::binary_search(t.begin(), t.end(), label))
        ++per_label[label].tp;
      else
        ++per_label[label].fp;
    for (std::uint32_t label : t)
      if (!std::binary_search(p.begin(), p.end(), label))
        ++per_label[label].fn;
  }

  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& [label, c] : per_label) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  const double micro_den = double(2 * tp + fp + fn);
  const double micro = micro_den == 0.0 ? 0.0 : 2.0 * double(tp) / micro_den;

  double macro_sum = 0.0;
  for (std::uint32_t label : truth_labels) {
    const auto it = per_label.find(label);
    const Counts c = it == per_label.end() ? Counts{} : it->second;
    const double den = double(2 * c.tp + c.fp + c.fn);
    macro_sum += den == 0.0 ? 0.0 : 2.0 * double(c.tp) / den;
  }
  const double macro =
      truth_labels.empty() ? 0.0 : macro_sum / double(truth_labels.size());
  return {micro, macro};
}

std::vector<EvalRow> evaluate(const DenseMatrix& emb, const LabelTable& labels,
                              const std::vector<double>& ratios,
                              std::uint32_t repeats, std::uint64_t seed,
                              double reg, std::uint32_t threads) {
  if (repeats < 1) throw ParamError("repeats must be >= 1");
  if (labels.labels.size() != emb.rows())
    throw ParamError("label table and embedding cover different vertex sets");

  std::vector<EvalRow> out;
  for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
    std::vector<double> micros, macros;
    for (std::uint32_t rep = 0; rep < repeats; ++rep) {
      const auto [train_ids, test_ids] =
          split(labels, ratios[ri], mix_seed(mix_seed(seed, ri), rep));
      const OvrModel model = train_ovr(emb, labels, train_ids, reg, threads);
      std::vector<std::vector<std::uint32_t>> pred, truth;
      pred.reserve(test_ids.size());
      truth.reserve(test_ids.size());
      for (VertexId v : test_ids) {
        const auto& t = labels.labels[v];
        // Test-time label counts are given: predict exactly |t| labels.
        pred.push_back(
            predict_topk(model, emb.row(v), std::uint32_t(t.size())));
        truth.push_back(t);
      }
      const auto [micro, macro] = micro_macro_f1(pred, truth);
      micros.push_back(micro);
      macros.push_back(macro);
    }
    auto mean_std = [](const std::vector<double>& xs) {
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= double(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      const double std_dev =
          xs.size() > 1 ? std::sqrt(var / double(xs.size() - 1)) : 0.0;
      return std::make_pair(mean, std_dev);
    };
    const auto [mi_mean, mi_std] = mean_std(micros);
    const auto [ma_mean, ma_std] = mean_std(macros);
    out.push_back({ratios[ri], mi_mean, mi_std, ma_mean, ma_std});
  }
  return out;
}

std::string format_eval_report(const std::vector<EvalRow>& rows) {
  std::string out = "ratio\tmicro_mean\tmicro_std\tmacro_mean\tmacro_std\n";
  char buf[160];
  for (const EvalRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%g\t%.6f\t%.6f\t%.6f\t%.6f\n", r.ratio,
                  r.micro_mean, r.micro_std, r.macro_mean, r.macro_std);
    out += buf;
  }
  return out;
}

}  // namespace sparsene
