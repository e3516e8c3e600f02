#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 40;  // >= 2
  std::size_t window = 5;        // >= 1
  std::size_t embed_dim = 128;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // linearly decayed
  std::uint64_t seed = 0;

  void validate() const;
};

// walks_per_node uniform random walks starting from every node, in node
// order. A walk stops early when it reaches a node with no neighbors, so an
// isolated start yields a length-1 walk.
std::vector<std::vector<NodeId>> generate_walks(const Graph& g, const WalkConfig& cfg, Rng& rng);

// Skip-gram with negative sampling over co-occurrences within `window`.
// Negative contexts are drawn from the walk-occurrence unigram distribution
// raised to the 3/4 power. Plain SGD with linear learning-rate decay.
Matrix skipgram_train(const std::vector<std::vector<NodeId>>& walks, NodeId num_nodes,
                      const WalkConfig& cfg, Rng& rng);

// generate_walks + skipgram_train with sub-seeds derived from cfg.seed.
Matrix deepwalk_embed(const Graph& g, const WalkConfig& cfg);

// Loss of one skip-gram training group (one positive context plus sampled
// negative contexts) and its analytic gradients; the exact quantity the SGD
// loop descends, factored out so it can be gradient-checked.
double skipgram_group_loss(std::span<const double> center, std::span<const double> pos_context,
                           const std::vector<std::span<const double>>& neg_contexts);
// d_* accumulate; all spans must share the embedding dimension.
void skipgram_group_grads(std::span<const double> center, std::span<const double> pos_context,
                          const std::vector<std::span<const double>>& neg_contexts,
                          std::span<double> d_center, std::span<double> d_pos,
                          const std::vector<std::span<double>>& d_negs);

}  // namespace citegraph
