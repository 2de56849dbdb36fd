// Command-line pipeline: embed | oracle | evaluate | scree.
//
// embed    edge list -> path-sampled sparsifier -> sparse PPMI matrix ->
//          randomized truncated SVD -> embedding + mapping + manifest.
// oracle   desk-scale verification: measures the spectral approximation
//          factor of a sampled sparsifier and checks both error bounds.
// evaluate multi-label one-vs-rest classification protocol on a stored
//          embedding.
// scree    singular-value profile for rank selection.
//
// Every flag can also be set through an environment variable with the
// SPARSENE_ prefix (e.g. SPARSENE_THREADS=8). Progress goes to stderr,
// data to files / stdout only.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsene/classify.hpp"
#include "sparsene/errors.hpp"
#include "sparsene/graph.hpp"
#include "sparsene/io.hpp"
#include "sparsene/oracle.hpp"
#include "sparsene/sparse.hpp"
#include "sparsene/sparsifier.hpp"
#include "sparsene/svd.hpp"

namespace {

using namespace sparsene;

class StageClock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
};

void log_stage(const std::string& cmd, const std::string& msg) {
  std::cerr << "[" << cmd << "] " << msg << "\n";
}

struct CommonSampling {
  std::string input;
  std::uint32_t window = 10;
  std::uint64_t samples = 0;
  double multiplier = 0.0;
  double negative = 1.0;
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;
  bool weighted = false;
};

void add_sampling_flags(CLI::App* cmd, CommonSampling& opt,
                        std::uint32_t default_window) {
  opt.window = default_window;
  cmd->add_option("-i,--input", opt.input, "edge list file")
      ->required()
      ->envname("SPARSENE_INPUT");
  cmd->add_option("-T,--window", opt.window, "context window size")
      ->envname("SPARSENE_WINDOW");
  cmd->add_option("-M,--samples", opt.samples, "explicit path sample count")
      ->envname("SPARSENE_SAMPLES");
  cmd->add_option("-k,--multiplier", opt.multiplier,
                  "sample count as k*window*m (default 1000 when --samples "
                  "is not given)")
      ->envname("SPARSENE_MULTIPLIER");
  cmd->add_option("-b,--negative", opt.negative, "negative-sample count")
      ->envname("SPARSENE_NEGATIVE");
  cmd->add_option("--seed", opt.seed, "random seed")->envname("SPARSENE_SEED");
  cmd->add_option("--threads", opt.threads, "worker threads")
      ->envname("SPARSENE_THREADS");
  cmd->add_flag("--weighted", opt.weighted, "input carries edge weights")
      ->envname("SPARSENE_WEIGHTED");
}

PipelineConfig to_config(const CommonSampling& opt, std::uint32_t dim) {
  PipelineConfig cfg;
  cfg.window = opt.window;
  cfg.samples = opt.samples;
  cfg.multiplier = opt.multiplier;
  if (cfg.samples == 0 && cfg.multiplier == 0.0) cfg.multiplier = 1000.0;
  cfg.dim = dim;
  cfg.negative = opt.negative;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.weighted = opt.weighted;
  return cfg;
}

int run_embed(const CommonSampling& opt, std::uint32_t dim,
              const std::string& output, std::string mapping_path,
              std::string manifest_path, const std::string& format,
              const std::string& dump_path) {
  if (mapping_path.empty()) mapping_path = output + ".map";
  if (manifest_path.empty()) manifest_path = output + ".manifest.json";
  const PipelineConfig cfg = to_config(opt, dim);
  cfg.validate();

  StageClock clock;
  const Graph g = load_edge_list_file(opt.input, opt.weighted);
  const double t_load = clock.lap();
  log_stage("embed", "loaded graph n=" + std::to_string(g.n()) +
                         " m=" + std::to_string(g.edge_count()));

  const std::uint64_t samples = cfg.resolve_samples(g.edge_count());
  const SparsifierAccumulator acc = build_sparsifier(g, cfg);
  const double t_sample = clock.lap();
  log_stage("embed", "sampled " + std::to_string(samples) + " paths -> " +
                         std::to_string(acc.pair_count()) + " pairs, " +
                         std::to_string(acc.dropped_self_loops()) +
                         " self-loops dropped");

  const SparseMatrix lap = laplacian_of(acc, g.n());
  const SparseMatrix ppmi = ppmi_sparsifier(g, lap, cfg.negative);
  const double t_transform = clock.lap();
  log_stage("embed", "sparse matrix nnz=" + std::to_string(ppmi.nnz()));

  const SvdFactors svd = randomized_svd(ppmi, cfg.dim, cfg.seed, cfg.threads);
  const DenseMatrix emb = embed(svd.u, svd.s);
  const double t_factor = clock.lap();
  log_stage("embed", "factorized to rank " + std::to_string(cfg.dim));

  if (format == "binary")
    write_embedding_binary(output, emb);
  else
    write_embedding_text(output, emb);
  write_mapping(mapping_path, g.raw_ids());
  if (!dump_path.empty()) {
    SparsifierDump dump;
    dump.n = g.n();
    dump.samples = samples;
    dump.window = cfg.window;
    dump.seed = cfg.seed;
    dump.dropped_self_loops = acc.dropped_self_loops();
    dump.pairs = acc.sorted_pairs();
    write_sparsifier_dump(dump_path, dump);
  }

  nlohmann::json manifest;
  manifest["command"] = "embed";
  manifest["input"] = opt.input;
  manifest["output"] = output;
  manifest["mapping"] = mapping_path;
  manifest["format"] = format;
  if (!dump_path.empty()) manifest["sparsifier_dump"] = dump_path;
  manifest["config"] = {{"window", cfg.window},
                        {"samples", samples},
                        {"multiplier", cfg.multiplier},
                        {"dim", cfg.dim},
                        {"negative", cfg.negative},
                        {"seed", cfg.seed},
                        {"threads", cfg.threads},
                        {"weighted", cfg.weighted}};
  manifest["counts"] = {{"n", g.n()},
                        {"m", g.edge_count()},
                        {"samples", samples},
                        {"pairs", acc.pair_count()},
                        {"dropped_self_loops", acc.dropped_self_loops()},
                        {"laplacian_nnz", lap.nnz()},
                        {"ppmi_nnz", ppmi.nnz()}};
  const double total = t_load + t_sample + t_transform + t_factor;
  manifest["timings_seconds"] = {{"load", t_load},
                                 {"sampling", t_sample},
                                 {"transform", t_transform},
                                 {"factorization", t_factor},
                                 {"total", total}};
  write_text_atomic(manifest_path, manifest.dump(2) + "\n");
  log_stage("embed", "wrote " + output + ", " + mapping_path + ", " +
                         manifest_path);
  return 0;
}

int run_oracle(const CommonSampling& opt, VertexId cap, bool print_epsilon) {
  const PipelineConfig cfg = to_config(opt, 1);
  cfg.validate();

  const Graph g = load_edge_list_file(opt.input, opt.weighted);
  if (g.n() > cap)
    throw SizeError("graph exceeds the dense reference cap of " +
                    std::to_string(cap) + " vertices");
  log_stage("oracle", "loaded graph n=" + std::to_string(g.n()) +
                          " m=" + std::to_string(g.edge_count()));

  const std::uint64_t samples = cfg.resolve_samples(g.edge_count());
  const SparsifierAccumulator acc = build_sparsifier(g, cfg);
  log_stage("oracle", "sampled " + std::to_string(samples) + " paths");
  const SparseMatrix lap_sparse = laplacian_of(acc, g.n());
  const DenseSymmetric ltilde = to_dense_symmetric(lap_sparse);

  const std::vector<double> alpha(cfg.window, 1.0 / double(cfg.window));
  const DenseSymmetric l = exact_walk_laplacian(g, alpha, cap);

  const double eps = measure_epsilon(ltilde, l);
  if (print_epsilon) std::cout << "epsilon=" << eps << "\n";
  if (eps >= 0.5) {
    std::cerr << "measured epsilon " << eps
              << " is outside the guarantee regime (< 0.5)\n";
    return 6;
  }

  const DenseSymmetric mtilde = walk_matrix_from_laplacian(g, ltilde);
  const DenseSymmetric m = exact_walk_matrix(g, cfg.window, cap);
  const BoundReport singular = check_singular_bound(mtilde, m, eps, g);
  const BoundReport frob =
      check_frobenius_bound(g, ltilde, l, eps, cfg.negative);

  std::cout << "singular-value bound:\n"
            << singular.table() << singular.summary() << "\n";
  std::cout << "frobenius bound:\n" << frob.table() << frob.summary() << "\n";
  return singular.pass && frob.pass ? 0 : 5;
}

int run_evaluate(const std::string& embedding_path,
                 const std::string& labels_path, const std::string& ratios_arg,
                 std::uint32_t repeats, std::uint64_t seed, double reg,
                 std::uint32_t threads, const std::string& mapping_path) {
  const DenseMatrix emb = read_embedding(embedding_path);

  std::vector<double> ratios;
  {
    std::string token;
    std::istringstream ss(ratios_arg);
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      double r = 0.0;
      try {
        std::size_t used = 0;
        r = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParamError("bad ratio '" + token + "'");
      }
      if (r > 1.0) r /= 100.0;  // "1,3,5,10" given as percentages
      ratios.push_back(r);
    }
    if (ratios.empty()) throw ParamError("no ratios given");
  }

  std::unordered_map<std::uint64_t, VertexId> raw_to_dense;
  const bool use_mapping = !mapping_path.empty();
  if (use_mapping)
    for (const auto& [raw, dense] : read_mapping(mapping_path))
      raw_to_dense[raw] = dense;

  std::ifstream label_in(labels_path);
  if (!label_in) throw ParseError("cannot open label file: " + labels_path);
  const LabelTable labels = parse_labels(
      label_in, emb.rows(), use_mapping ? &raw_to_dense : nullptr);
  log_stage("evaluate", std::to_string(labels.labeled_vertices().size()) +
                            " labeled vertices, " +
                            std::to_string(labels.label_count) + " labels");

  const auto rows = evaluate(emb, labels, ratios, repeats, seed, reg, threads);
  std::cout << format_eval_report(rows);
  return 0;
}

int run_scree(const CommonSampling& opt, std::uint32_t dim,
              const std::string& sparsifier_path) {
  const PipelineConfig cfg = to_config(opt, std::max<std::uint32_t>(dim, 1));
  cfg.validate();

  const Graph g = load_edge_list_file(opt.input, opt.weighted);
  SparseMatrix lap;
  if (!sparsifier_path.empty()) {
    const SparsifierDump dump = read_sparsifier_dump(sparsifier_path);
    if (dump.n != g.n())
      throw ParseError("sparsifier dump dimension does not match graph");
    lap = laplacian_from_pairs(dump.pairs, dump.n);
    log_stage("scree", "loaded sparsifier dump with " +
                           std::to_string(dump.pairs.size()) + " pairs");
  } else {
    const SparsifierAccumulator acc = build_sparsifier(g, cfg);
    lap = laplacian_of(acc, g.n());
  }
  const SparseMatrix ppmi = ppmi_sparsifier(g, lap, cfg.negative);

  // Rank cannot exceed n; report exact zeros beyond it up to the
  // requested dim (singular values past rank n of an n x n matrix).
  const std::uint32_t rank = std::min<std::uint32_t>(dim, g.n());
  const SvdFactors svd = randomized_svd(ppmi, rank, cfg.seed, cfg.threads);
  std::vector<double> s = svd.s;
  s.resize(dim, 0.0);
  for (const auto& [r, v] : scree_data(s))
    std::cout << r << "\t" << v << "\n";
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 4;
  if (dynamic_cast<const RegimeError*>(&e)) return 6;
  if (dynamic_cast<const IncomparableError*>(&e)) return 6;
  if (dynamic_cast<const ParamError*>(&e)) return 2;
  if (dynamic_cast<const SizeError*>(&e)) return 2;
  if (dynamic_cast<const ResourceError*>(&e)) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"node embeddings via path-sampled spectral sparsification"};
  app.require_subcommand(1);

  CommonSampling embed_opt;
  std::string embed_output, embed_mapping, embed_manifest, embed_dump;
  std::string embed_format = "text";
  std::uint32_t embed_dim = 128;
  CLI::App* embed_cmd =
      app.add_subcommand("embed", "learn embeddings end to end");
  add_sampling_flags(embed_cmd, embed_opt, 10);
  embed_cmd->add_option("-o,--output", embed_output, "embedding output file")
      ->required()
      ->envname("SPARSENE_OUTPUT");
  embed_cmd->add_option("-d,--dim", embed_dim, "embedding dimension")
      ->envname("SPARSENE_DIM");
  embed_cmd
      ->add_option("--format", embed_format, "embedding format: text|binary")
      ->check(CLI::IsMember({"text", "binary"}))
      ->envname("SPARSENE_FORMAT");
  embed_cmd->add_option("--mapping", embed_mapping,
                        "vertex mapping output (default <output>.map)");
  embed_cmd->add_option("--manifest", embed_manifest,
                        "manifest output (default <output>.manifest.json)");
  embed_cmd->add_option("--dump-sparsifier", embed_dump,
                        "also write the sampled sparsifier pairs");

  CommonSampling oracle_opt;
  std::uint32_t oracle_cap = kOracleCap;
  bool oracle_eps = true;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "measure epsilon and check both error bounds");
  add_sampling_flags(oracle_cmd, oracle_opt, 2);
  oracle_cmd->add_option("--cap", oracle_cap, "dense reference size cap");
  oracle_cmd->add_flag("--epsilon-measure,!--no-epsilon-measure", oracle_eps,
                       "print the measured spectral approximation factor");

  std::string eval_embedding, eval_labels, eval_mapping;
  std::string eval_ratios = "0.5";
  std::uint32_t eval_repeats = 10;
  std::uint64_t eval_seed = 1;
  double eval_reg = 1.0;
  std::uint32_t eval_threads = 1;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "multi-label classification protocol on an embedding");
  eval_cmd->add_option("--embedding", eval_embedding, "embedding file")
      ->required()
      ->envname("SPARSENE_EMBEDDING");
  eval_cmd->add_option("--labels", eval_labels, "label file")
      ->required()
      ->envname("SPARSENE_LABELS");
  eval_cmd
      ->add_option("--ratios", eval_ratios,
                   "comma-separated train ratios; values > 1 are percent")
      ->envname("SPARSENE_RATIOS");
  eval_cmd->add_option("--repeats", eval_repeats, "splits per ratio")
      ->envname("SPARSENE_REPEATS");
  eval_cmd->add_option("--seed", eval_seed, "random seed")
      ->envname("SPARSENE_SEED");
  eval_cmd->add_option("--reg", eval_reg, "L2 regularization strength")
      ->envname("SPARSENE_REG");
  eval_cmd->add_option("--threads", eval_threads, "worker threads")
      ->envname("SPARSENE_THREADS");
  eval_cmd->add_option("--mapping", eval_mapping,
                       "vertex mapping file (label ids are raw ids)");

  CommonSampling scree_opt;
  std::uint32_t scree_dim = 0;
  std::string scree_sparsifier;
  CLI::App* scree_cmd = app.add_subcommand(
      "scree", "singular-value profile for rank selection");
  add_sampling_flags(scree_cmd, scree_opt, 10);
  scree_cmd->add_option("-d,--dim", scree_dim, "number of singular values")
      ->required()
      ->envname("SPARSENE_DIM");
  scree_cmd->add_option("--sparsifier", scree_sparsifier,
                        "reuse a sparsifier dump instead of sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (embed_cmd->parsed())
      return run_embed(embed_opt, embed_dim, embed_output, embed_mapping,
                       embed_manifest, embed_format, embed_dump);
    if (oracle_cmd->parsed())
      return run_oracle(oracle_opt, oracle_cap, oracle_eps);
    if (eval_cmd->parsed())
      return run_evaluate(eval_embedding, eval_labels, eval_ratios,
                          eval_repeats, eval_seed, eval_reg, eval_threads,
                          eval_mapping);
    if (scree_cmd->parsed())
      return run_scree(scree_opt, scree_dim, scree_sparsifier);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 2;
}
