#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sparsene/dense.hpp"
#include "sparsene/graph.hpp"
#include "sparsene/sparse.hpp"

namespace sparsene {

// Embedding text format: header "n d", then one line per vertex
// "dense_id v1 ... vd" with 17-significant-digit reals (round-trippable).
void write_embedding_text(const std::string& path, const DenseMatrix& emb);

// Binary format: 24-byte header (magic "NSMF", version u32, n u64, d u32,
// 4 pad bytes), then row-major little-endian 64-bit floats.
void write_embedding_binary(const std::string& path, const DenseMatrix& emb);

// Reads either format (sniffed by magic). ParseError on malformed input.
DenseMatrix read_embedding(const std::string& path);

// Vertex-mapping file: lines "raw_id dense_id".
void write_mapping(const std::string& path,
                   const std::vector<std::uint64_t>& raw_ids);
std::vector<std::pair<std::uint64_t, VertexId>> read_mapping(
    const std::string& path);

// Round-trippable edge list in raw ids (canonical u < v, sorted); weights
// written only for weighted graphs.
void write_edge_list(std::ostream& out, const Graph& g);

// Sparsifier dump: a JSON header line {"n":..,"samples":..,"window":..,
// "seed":..,"dropped_self_loops":..} followed by "u v weight" lines in
// canonical sorted order. Re-loadable to resume the pipeline.
struct SparsifierDump {
  VertexId n = 0;
  std::uint64_t samples = 0;
  std::uint32_t window = 0;
  std::uint64_t seed = 0;
  std::uint64_t dropped_self_loops = 0;
  std::vector<Triplet> pairs;  // u < v, sorted
};
void write_sparsifier_dump(const std::string& path, const SparsifierDump& d);
SparsifierDump read_sparsifier_dump(const std::string& path);

// Writes content to a temporary sibling and renames it into place, so the
// destination never holds a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace sparsene
