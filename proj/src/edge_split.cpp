#include "citegraph/edge_split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "citegraph/error.hpp"

namespace citegraph {

SplitResult split_edges(const Graph& g, double test_frac, double val_frac, std::uint64_t seed) {
  if (!(test_frac > 0.0 || val_frac > 0.0) || test_frac + val_frac >= 1.0 || test_frac < 0.0 ||
      val_frac < 0.0) {
    throw ConfigError("split_edges: require 0 < test_frac + val_frac < 1");
  }
  auto edges = g.edge_list();
  const std::size_t m = edges.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(m)));
  const auto n_val = static_cast<std::size_t>(std::llround(val_frac * static_cast<double>(m)));
  if (m == 0 || n_test + n_val >= m) {
    throw ConfigError("split_edges: graph with " + std::to_string(m) +
                      " edges cannot honor the requested fractions with a non-empty train set");
  }

  Rng rng(derive_seed(seed, "split/edges"));
  rng.shuffle(edges);

  SplitResult result;
  result.split.seed = seed;
  result.split.test_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_test));
  result.split.val_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_test),
                              edges.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  result.split.train_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_test + n_val),
                                edges.end());

  // Negatives: uniform non-edges of the ORIGINAL graph, distinct across all
  // three splits. Assigned test first, then val, then train.
  const std::size_t total_pairs = static_cast<std::size_t>(g.num_nodes()) *
                                  (g.num_nodes() >= 1 ? g.num_nodes() - 1 : 0) / 2;
  if (m + m > total_pairs) {
    throw ConfigError("split_edges: not enough non-edges to sample " + std::to_string(m) +
                      " negatives");
  }
  Rng neg_rng(derive_seed(seed, "split/negatives"));
  std::set<Edge> chosen;
  auto draw_negatives = [&](std::size_t count, std::vector<Edge>& out) {
    out.reserve(count);
    while (out.size() < count) {
      const auto a = static_cast<NodeId>(neg_rng.uniform_index(g.num_nodes()));
      const auto b = static_cast<NodeId>(neg_rng.uniform_index(g.num_nodes()));
      if (a == b) continue;
      const Edge e{std::min(a, b), std::max(a, b)};
      if (g.has_edge(e.first, e.second)) continue;
      if (!chosen.insert(e).second) continue;
      out.push_back(e);
    }
  };
  draw_negatives(result.split.test_pos.size(), result.split.test_neg);
  draw_negatives(result.split.val_pos.size(), result.split.val_neg);
  draw_negatives(result.split.train_pos.size(), result.split.train_neg);

  result.train_graph = Graph::from_edges(result.split.train_pos, g.num_nodes());
  return result;
}

}  // namespace citegraph
