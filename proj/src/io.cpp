#include "sparsene/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparsene/errors.hpp"

namespace sparsene {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'M', 'F'};
constexpr std::uint32_t kBinaryVersion = 1;

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_embedding_text(const std::string& path, const DenseMatrix& emb) {
  std::ofstream out = open_out(path, false);
  out << emb.rows() << ' ' << emb.cols() << '\n';
  for (std::size_t r = 0; r < emb.rows(); ++r) {
    out << r;
    for (std::size_t c = 0; c < emb.cols(); ++c)
      out << ' ' << format_real(emb(r, c));
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

void write_embedding_binary(const std::string& path, const DenseMatrix& emb) {
  std::ofstream out = open_out(path, true);
  const std::uint64_t n = emb.rows();
  const std::uint32_t d = std::uint32_t(emb.cols());
  const std::uint32_t pad = 0;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kBinaryVersion), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&pad), 4);
  out.write(reinterpret_cast<const char*>(emb.data()),
            std::streamsize(sizeof(double) * emb.rows() * emb.cols()));
  if (!out) throw Error("write failed: " + path);
}

DenseMatrix read_embedding(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open embedding file: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
    std::uint32_t version = 0, d = 0, pad = 0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&pad), 4);
    if (!in || version != kBinaryVersion)
      throw ParseError("bad embedding binary header: " + path);
    DenseMatrix emb(n, d);
    in.read(reinterpret_cast<char*>(emb.data()),
            std::streamsize(sizeof(double) * n * d));
    if (!in || in.gcount() != std::streamsize(sizeof(double) * n * d))
      throw ParseError("truncated embedding binary: " + path);
    return emb;
  }

  in.clear();
  in.seekg(0);
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d) || n == 0 || d == 0)
    throw ParseError("bad embedding header in " + path);
  DenseMatrix emb(n, d);
  std::vector<bool> seen(n, false);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t id = 0;
    if (!(in >> id) || id >= n)
      throw ParseError("bad vertex id in embedding row of " + path);
    if (seen[id]) throw ParseError("duplicate vertex id in " + path);
    seen[id] = true;
    for (std::size_t c = 0; c < d; ++c)
      if (!(in >> emb(id, c)))
        throw ParseError("truncated embedding row in " + path);
  }
  return emb;
}

void write_mapping(const std::string& path,
                   const std::vector<std::uint64_t>& raw_ids) {
  std::ofstream out = open_out(path, false);
  for (std::size_t dense = 0; dense < raw_ids.size(); ++dense)
    out << raw_ids[dense] << ' ' << dense << '\n';
  if (!out) throw Error("write failed: " + path);
}

std::vector<std::pair<std::uint64_t, VertexId>> read_mapping(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mapping file: " + path);
  std::vector<std::pair<std::uint64_t, VertexId>> out;
  std::uint64_t raw = 0, dense = 0;
  while (in >> raw >> dense) out.emplace_back(raw, VertexId(dense));
  if (!in.eof()) throw ParseError("malformed mapping file: " + path);
  return out;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto& raw = g.raw_ids();
  for (const Edge& e : g.edges()) {
    if (g.weighted()) {
      out << raw[e.u] << ' ' << raw[e.v] << ' ' << format_real(e.w) << '\n';
    } else {
      // Unweighted graphs carry integer multiplicities from duplicate
      // merging; emit that many parallel lines so a reload merges back.
      const auto copies = std::uint64_t(e.w);
      for (std::uint64_t i = 0; i < copies; ++i)
        out << raw[e.u] << ' ' << raw[e.v] << '\n';
    }
  }
}

void write_sparsifier_dump(const std::string& path, const SparsifierDump& d) {
  nlohmann::json header;
  header["n"] = d.n;
  header["samples"] = d.samples;
  header["window"] = d.window;
  header["seed"] = d.seed;
  header["dropped_self_loops"] = d.dropped_self_loops;
  std::ostringstream body;
  body << header.dump() << '\n';
  for (const Triplet& t : d.pairs)
    body << t.row << ' ' << t.col << ' ' << format_real(t.value) << '\n';
  write_text_atomic(path, body.str());
}

SparsifierDump read_sparsifier_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sparsifier dump: " + path);
  std::string header_line;
  if (!std::getline(in, header_line))
    throw ParseError("empty sparsifier dump: " + path);
  SparsifierDump d;
  try {
    const nlohmann::json header = nlohmann::json::parse(header_line);
    d.n = header.at("n").get<VertexId>();
    d.samples = header.at("samples").get<std::uint64_t>();
    d.window = header.at("window").get<std::uint32_t>();
    d.seed = header.at("seed").get<std::uint64_t>();
    d.dropped_self_loops = header.at("dropped_self_loops").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad sparsifier dump header: " + std::string(e.what()));
  }
  VertexId u = 0, v = 0;
  double w = 0.0;
  while (in >> u >> v >> w) {
    if (u >= v || v >= d.n || !(w > 0.0))
      throw ParseError("bad sparsifier dump pair in " + path);
    d.pairs.push_back({u, v, w});
  }
  if (!in.eof()) throw ParseError("malformed sparsifier dump: " + path);
  return d;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out = open_out(tmp, false);
    out << content;
    if (!out) throw Error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp + " into place: " + ec.message());
}

}  // namespace sparsene
