#pragma once

#include <cstdint>
#include <vector>

#include "citegraph/data_io.hpp"
#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

// Planted-community citation graph: a stochastic block model plus designated
// bridge nodes that receive extra edges into one other community. Bridge
// features sit between their home and linked community centers, so topic
// distance stays informative exactly where network distance is not.
struct SynthConfig {
  std::size_t num_communities = 8;
  std::size_t community_size = 150;
  double p_in = 0.05;
  double p_out = 0.002;
  double bridge_fraction = 0.05;
  std::size_t bridge_degree_boost = 8;
  std::size_t feature_dim = 64;
  double center_separation = 4.0;
  double feature_noise = 1.0;
  std::uint64_t seed = 0;
  bool largest_component_only = false;

  std::size_t num_nodes() const { return num_communities * community_size; }
  void validate() const;  // throws ConfigError
};

struct SynthData {
  Graph graph;
  Matrix features;
  NodeLabels labels;
  // Community a bridge's boost edges point into; -1 for non-bridges.
  std::vector<std::int32_t> bridge_target;
};

// Deterministic given cfg.seed (bit-reproducible across runs).
SynthData generate_synthetic(const SynthConfig& cfg);

}  // namespace citegraph
