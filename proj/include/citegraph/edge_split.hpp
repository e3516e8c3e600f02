#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "citegraph/graph.hpp"

namespace citegraph {

// Train/validation/test partition of a graph's edges plus matched negative
// (non-edge) samples. |test_pos| = round(test_frac * |E|), |val_pos| =
// round(val_frac * |E|); each negative set has the size of its positive set;
// negatives are absent from the original edge set and pairwise distinct
// across all three splits.
struct EdgeSplit {
  std::vector<Edge> train_pos, val_pos, test_pos;
  std::vector<Edge> train_neg, val_neg, test_neg;
  std::uint64_t seed = 0;
};

struct SplitResult {
  EdgeSplit split;
  Graph train_graph;  // original graph minus val/test edges; nodes retained
};

// Uniform random partition. Preconditions: 0 < test_frac + val_frac < 1.
// Throws ConfigError when the graph is too small to leave a non-empty train
// set (or has no edges).
SplitResult split_edges(const Graph& g, double test_frac, double val_frac, std::uint64_t seed);

}  // namespace citegraph
