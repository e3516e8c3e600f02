#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

// File formats (all UTF-8 text, lines beginning '#' ignored):
//   edges:      one edge per line, "u v"
//   features /
//   embeddings: header line "N D", then N rows of D floats (row = node id)
//   labels:     one line per node, "node_id community_id is_bridge"
// Writers go through a temp file + rename so readers never observe a
// partially written file.

// Writes `content` to `path` atomically.
void write_text_atomic(const std::string& path, const std::string& content);

std::vector<Edge> load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const std::vector<Edge>& edges);

// Parse errors (ragged rows, non-numeric fields, row-count mismatch) carry
// the offending line number.
Matrix load_features(const std::string& path);
// Values are written with 17 significant digits, so save/load round-trips
// are value-exact.
void save_embeddings(const std::string& path, const Matrix& emb);
inline Matrix load_embeddings(const std::string& path) { return load_features(path); }

struct NodeLabels {
  std::vector<std::uint32_t> community;
  std::vector<std::uint8_t> is_bridge;
};

NodeLabels load_labels(const std::string& path, std::size_t num_nodes);
void save_labels(const std::string& path, const NodeLabels& labels);

// FNV-1a 64-bit over a file's bytes, as a hex string; used in run manifests.
std::string file_content_hash(const std::string& path);

}  // namespace citegraph
