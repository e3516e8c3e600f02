#include "citegraph/data_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "citegraph/error.hpp"

namespace citegraph {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw ConfigError(path + ":" + std::to_string(line_no) + ": " + what);
}

bool is_comment_or_blank(const std::string& line) {
  for (const char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line_no) {
  double value = 0.0;
  const auto* begin = tok.data();
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    parse_fail(path, line_no, "non-numeric field '" + tok + "'");
  }
  return value;
}

std::uint64_t parse_uint(const std::string& tok, const std::string& path, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    parse_fail(path, line_no, "expected a non-negative integer, got '" + tok + "'");
  }
  return value;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("rename " + tmp + " -> " + path + " failed: " + ec.message());
}

std::vector<Edge> load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge file: " + path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto toks = split_ws(line);
    if (toks.size() != 2) {
      parse_fail(path, line_no, "expected 'u v', got " + std::to_string(toks.size()) + " fields");
    }
    const auto u = parse_uint(toks[0], path, line_no);
    const auto v = parse_uint(toks[1], path, line_no);
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

void save_edge_list(const std::string& path, const std::vector<Edge>& edges) {
  std::string out;
  out.reserve(edges.size() * 12);
  char buf[64];
  for (const auto& [u, v] : edges) {
    const int n = std::snprintf(buf, sizeof buf, "%u %u\n", u, v);
    out.append(buf, static_cast<std::size_t>(n));
  }
  write_text_atomic(path, out);
}

Matrix load_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open feature file: " + path);
  std::string line;
  std::size_t line_no = 0;

  std::size_t n = 0, d = 0;
  bool have_header = false;
  Matrix m;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto toks = split_ws(line);
    if (!have_header) {
      if (toks.size() != 2) parse_fail(path, line_no, "expected header 'N D'");
      n = parse_uint(toks[0], path, line_no);
      d = parse_uint(toks[1], path, line_no);
      if (d == 0) parse_fail(path, line_no, "feature dimension must be >= 1");
      m = Matrix(n, d);
      have_header = true;
      continue;
    }
    if (row >= n) parse_fail(path, line_no, "more rows than header N=" + std::to_string(n));
    if (toks.size() != d) {
      parse_fail(path, line_no, "ragged row: expected " + std::to_string(d) + " values, got " +
                                    std::to_string(toks.size()));
    }
    for (std::size_t c = 0; c < d; ++c) m(row, c) = parse_double(toks[c], path, line_no);
    ++row;
  }
  if (!have_header) throw ConfigError(path + ": missing 'N D' header");
  if (row != n) {
    throw ConfigError(path + ": truncated: header says N=" + std::to_string(n) + " but found " +
                      std::to_string(row) + " rows");
  }
  return m;
}

void save_embeddings(const std::string& path, const Matrix& emb) {
  std::string out;
  out.reserve(emb.size() * 12 + 32);
  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%zu %zu\n", emb.rows(), emb.cols());
  out.append(buf, static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < emb.rows(); ++r) {
    const auto row = emb.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      n = std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out.append(buf, static_cast<std::size_t>(n));
      out.push_back(c + 1 == row.size() ? '\n' : ' ');
    }
    if (row.empty()) out.push_back('\n');
  }
  write_text_atomic(path, out);
}

NodeLabels load_labels(const std::string& path, std::size_t num_nodes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open labels file: " + path);
  NodeLabels labels;
  labels.community.assign(num_nodes, 0);
  labels.is_bridge.assign(num_nodes, 0);
  std::vector<bool> seen(num_nodes, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto toks = split_ws(line);
    if (toks.size() != 3) parse_fail(path, line_no, "expected 'node community is_bridge'");
    const auto node = parse_uint(toks[0], path, line_no);
    if (node >= num_nodes) parse_fail(path, line_no, "node id " + toks[0] + " out of range");
    if (seen[node]) parse_fail(path, line_no, "duplicate node id " + toks[0]);
    seen[node] = true;
    labels.community[node] = static_cast<std::uint32_t>(parse_uint(toks[1], path, line_no));
    const auto bridge = parse_uint(toks[2], path, line_no);
    if (bridge > 1) parse_fail(path, line_no, "is_bridge must be 0 or 1");
    labels.is_bridge[node] = static_cast<std::uint8_t>(bridge);
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if (!seen[v]) throw ConfigError(path + ": missing label for node " + std::to_string(v));
  }
  return labels;
}

void save_labels(const std::string& path, const NodeLabels& labels) {
  std::string out;
  char buf[64];
  for (std::size_t v = 0; v < labels.community.size(); ++v) {
    const int n = std::snprintf(buf, sizeof buf, "%zu %u %u\n", v, labels.community[v],
                                static_cast<unsigned>(labels.is_bridge[v]));
    out.append(buf, static_cast<std::size_t>(n));
  }
  write_text_atomic(path, out);
}

std::string file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace citegraph
