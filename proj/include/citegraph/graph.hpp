#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "citegraph/rng.hpp"

namespace citegraph {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable undirected graph in CSR layout. Neighbor lists are sorted
// ascending, deduplicated and self-loop free; u in N(v) iff v in N(u).
// Safe for concurrent reads after construction.
class Graph {
 public:
  Graph() = default;

  // Collapses duplicates and (u,v)/(v,u) pairs, drops self-loops. Throws
  // ConfigError naming the offending pair if an endpoint is >= num_nodes.
  static Graph from_edges(std::span<const Edge> edges, NodeId num_nodes);
  static Graph from_edges(std::initializer_list<Edge> edges, NodeId num_nodes) {
    return from_edges(std::span<const Edge>(edges.begin(), edges.size()), num_nodes);
  }

  NodeId num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;

  bool has_edge(NodeId u, NodeId v) const;  // O(log deg(u))

  // Canonical edge list: (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edge_list() const;

 private:
  NodeId num_nodes_ = 0;
  std::vector<std::size_t> offsets_;  // size num_nodes_ + 1
  std::vector<NodeId> adjacency_;
};

// Partition of a neighbor subset into the connected components of the
// subgraph induced by that subset. Components are ordered by their smallest
// member; members are sorted ascending.
struct NeighborComponents {
  std::vector<std::vector<NodeId>> components;
};

// Components of the subgraph of g induced by `subset`. Edges whose endpoints
// are not both inside `subset` are ignored, so two members connected only
// through an outside path land in different components.
// Preconditions (std::invalid_argument): subset is a subset of N(v), and
// v is not in subset. `subset` need not be sorted.
NeighborComponents neighborhood_components(const Graph& g, NodeId v, std::span<const NodeId> subset);

// All of N(v) when deg(v) <= fanout, otherwise a uniform random subset of
// size fanout without replacement. Result sorted ascending. No rng draws are
// consumed when the full neighborhood is returned. fanout >= 1.
std::vector<NodeId> sample_neighbors(const Graph& g, NodeId v, std::size_t fanout, Rng& rng);

}  // namespace citegraph
