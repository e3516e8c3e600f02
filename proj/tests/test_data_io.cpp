#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "citegraph/data_io.hpp"
#include "citegraph/error.hpp"
#include "citegraph/synthetic.hpp"
#include "test_support.hpp"

using namespace citegraph;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("citegraph_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_raw(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("features: 3 rows of 4 floats with a comment header") {
  TempDir dir;
  const auto path = dir.file("f.txt");
  write_raw(path, "# generated\n3 4\n1 2 3 4\n5 6 7 8\n9 10 11 12\n");
  const Matrix m = load_features(path);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(2, 3) == 12.0);
}

TEST_CASE("features: ragged row reports the line number") {
  TempDir dir;
  const auto path = dir.file("ragged.txt");
  write_raw(path, "2 3\n1 2 3\n4 5\n");
  CHECK_THROWS_WITH_AS(load_features(path), doctest::Contains(":3:"), ConfigError);
}

TEST_CASE("features: non-numeric field reports the line number") {
  TempDir dir;
  const auto path = dir.file("bad.txt");
  write_raw(path, "1 2\n1 oops\n");
  CHECK_THROWS_WITH_AS(load_features(path), doctest::Contains("oops"), ConfigError);
}

TEST_CASE("features: truncated body is rejected") {
  TempDir dir;
  const auto path = dir.file("short.txt");
  write_raw(path, "3 2\n1 2\n3 4\n");
  CHECK_THROWS_WITH_AS(load_features(path), doctest::Contains("truncated"), ConfigError);
}

TEST_CASE("features: extra rows beyond the header are rejected") {
  TempDir dir;
  const auto path = dir.file("long.txt");
  write_raw(path, "1 2\n1 2\n3 4\n");
  CHECK_THROWS_AS(load_features(path), ConfigError);
}

TEST_CASE("embeddings round-trip value-exactly") {
  TempDir dir;
  Rng rng(91);
  Matrix m(10, 8);
  for (double& x : m.data()) x = rng.normal() * std::pow(10.0, rng.uniform() * 6 - 3);
  const auto path = dir.file("emb.txt");
  save_embeddings(path, m);
  const Matrix back = load_embeddings(path);
  REQUIRE(back.rows() == 10);
  REQUIRE(back.cols() == 8);
  CHECK(back.data() == m.data());  // bitwise through 17 significant digits
}

TEST_CASE("atomic writes leave no temp file behind") {
  TempDir dir;
  const auto path = dir.file("x.txt");
  write_text_atomic(path, "hello\n");
  CHECK(fs::exists(path));
  CHECK(!fs::exists(path + ".tmp"));
}

TEST_CASE("edge list io with comments and blank lines") {
  TempDir dir;
  const auto path = dir.file("e.txt");
  write_raw(path, "# edges\n\n0 1\n1 2\n");
  const auto edges = load_edge_list(path);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == Edge{0, 1});
  save_edge_list(dir.file("e2.txt"), edges);
  CHECK(load_edge_list(dir.file("e2.txt")) == edges);
}

TEST_CASE("edge list with a malformed line is rejected with its number") {
  TempDir dir;
  const auto path = dir.file("bad_edges.txt");
  write_raw(path, "0 1\n2\n");
  CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains(":2:"), ConfigError);
}

TEST_CASE("labels round-trip and validate") {
  TempDir dir;
  NodeLabels labels;
  labels.community = {0, 0, 1, 2};
  labels.is_bridge = {0, 1, 0, 0};
  const auto path = dir.file("labels.txt");
  save_labels(path, labels);
  const NodeLabels back = load_labels(path, 4);
  CHECK(back.community == labels.community);
  CHECK(back.is_bridge == labels.is_bridge);
  CHECK_THROWS_AS(load_labels(path, 5), ConfigError);  // missing node 4
}

TEST_CASE("synthetic: no inter-community edges when p_out and bridges are off") {
  SynthConfig cfg;
  cfg.num_communities = 3;
  cfg.community_size = 20;
  cfg.p_in = 0.3;
  cfg.p_out = 0.0;
  cfg.bridge_fraction = 0.0;
  cfg.feature_dim = 4;
  cfg.seed = 1;
  const SynthData data = generate_synthetic(cfg);
  for (const auto& [u, v] : data.graph.edge_list()) {
    CHECK(data.labels.community[u] == data.labels.community[v]);
  }
}

TEST_CASE("synthetic: intra-community density within 3 standard errors of p_in") {
  // Pooled over 5 seeds; communities of 100.
  const double p_in = 0.1;
  std::size_t intra_edges = 0, intra_pairs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;
    cfg.num_communities = 2;
    cfg.community_size = 100;
    cfg.p_in = p_in;
    cfg.p_out = 0.0;
    cfg.bridge_fraction = 0.0;
    cfg.feature_dim = 4;
    cfg.seed = seed;
    const SynthData data = generate_synthetic(cfg);
    intra_edges += data.graph.num_edges();
    intra_pairs += 2 * (100 * 99 / 2);
  }
  const double p_hat = static_cast<double>(intra_edges) / static_cast<double>(intra_pairs);
  const double se = std::sqrt(p_in * (1.0 - p_in) / static_cast<double>(intra_pairs));
  CHECK(std::abs(p_hat - p_in) < 3.0 * se);
}

TEST_CASE("synthetic: bridges gain enough foreign neighbors") {
  SynthConfig cfg;
  cfg.num_communities = 4;
  cfg.community_size = 25;
  cfg.p_in = 0.2;
  cfg.p_out = 0.01;
  cfg.bridge_fraction = 0.2;
  cfg.bridge_degree_boost = 5;
  cfg.feature_dim = 8;
  cfg.seed = 3;
  const SynthData data = generate_synthetic(cfg);
  std::size_t bridges = 0;
  for (NodeId v = 0; v < data.graph.num_nodes(); ++v) {
    if (data.labels.is_bridge[v] == 0) continue;
    ++bridges;
    std::size_t foreign = 0;
    for (const NodeId u : data.graph.neighbors(v)) {
      foreign += data.labels.community[u] != data.labels.community[v] ? 1 : 0;
    }
    CHECK(foreign >= cfg.bridge_degree_boost);
    CHECK(data.bridge_target[v] >= 0);
  }
  CHECK(bridges == 4 * 5);  // fraction 0.2 of 25, per community
}

TEST_CASE("synthetic: inter-community edges are exactly SBM noise plus bridge boosts") {
  // With p_out = 0, every inter-community edge must touch a bridge and point
  // into its designated target community.
  SynthConfig cfg;
  cfg.num_communities = 3;
  cfg.community_size = 30;
  cfg.p_in = 0.2;
  cfg.p_out = 0.0;
  cfg.bridge_fraction = 0.1;
  cfg.bridge_degree_boost = 6;
  cfg.feature_dim = 4;
  cfg.seed = 4;
  const SynthData data = generate_synthetic(cfg);
  for (const auto& [u, v] : data.graph.edge_list()) {
    if (data.labels.community[u] == data.labels.community[v]) continue;
    const bool u_explains = data.labels.is_bridge[u] != 0 &&
                            data.bridge_target[u] ==
                                static_cast<std::int32_t>(data.labels.community[v]);
    const bool v_explains = data.labels.is_bridge[v] != 0 &&
                            data.bridge_target[v] ==
                                static_cast<std::int32_t>(data.labels.community[u]);
    CHECK((u_explains || v_explains));
  }
}

TEST_CASE("synthetic generation is bit-reproducible") {
  SynthConfig cfg;
  cfg.num_communities = 2;
  cfg.community_size = 15;
  cfg.p_in = 0.3;
  cfg.p_out = 0.02;
  cfg.bridge_fraction = 0.1;
  cfg.bridge_degree_boost = 3;
  cfg.feature_dim = 6;
  cfg.seed = 5;
  const SynthData a = generate_synthetic(cfg);
  const SynthData b = generate_synthetic(cfg);
  CHECK(a.graph.edge_list() == b.graph.edge_list());
  CHECK(a.features.data() == b.features.data());  // bitwise
  CHECK(a.labels.community == b.labels.community);
  CHECK(a.labels.is_bridge == b.labels.is_bridge);
}

TEST_CASE("synthetic config validation") {
  SynthConfig cfg;
  cfg.p_in = 0.01;
  cfg.p_out = 0.05;  // inverted
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  SynthConfig cfg2;
  cfg2.bridge_fraction = 1.5;
  CHECK_THROWS_AS(cfg2.validate(), ConfigError);
}

TEST_CASE("largest-component filter keeps one connected piece") {
  SynthConfig cfg;
  cfg.num_communities = 2;
  cfg.community_size = 12;
  cfg.p_in = 0.5;
  cfg.p_out = 0.0;  // two disconnected blocks
  cfg.bridge_fraction = 0.0;
  cfg.feature_dim = 3;
  cfg.seed = 6;
  cfg.largest_component_only = true;
  const SynthData data = generate_synthetic(cfg);
  CHECK(data.graph.num_nodes() <= 12);
  CHECK(data.features.rows() == data.graph.num_nodes());
  CHECK(data.labels.community.size() == data.graph.num_nodes());
  // All surviving nodes share one community (the blocks were disconnected).
  for (const auto c : data.labels.community) CHECK(c == data.labels.community[0]);
}
