#include "citegraph/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "citegraph/error.hpp"

namespace citegraph {

Graph Graph::from_edges(std::span<const Edge> edges, NodeId num_nodes) {
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw ConfigError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                        std::to_string(v) + ") with num_nodes=" + std::to_string(num_nodes));
    }
    if (u == v) continue;  // self-loops dropped at load
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.num_nodes_ = num_nodes;
  std::vector<std::size_t> deg(num_nodes, 0);
  for (const auto& [u, v] : canon) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(num_nodes + 1, 0);
  for (NodeId i = 0; i < num_nodes; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[num_nodes]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : canon) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  // Canonical input order plus in-order insertion leaves each list sorted.
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t m = 0;
  for (NodeId v = 0; v < num_nodes_; ++v) m = std::max(m, degree(v));
  return m;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes_; ++u) {
    for (const NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

NeighborComponents neighborhood_components(const Graph& g, NodeId v, std::span<const NodeId> subset) {
  std::vector<NodeId> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  const auto nv = g.neighbors(v);
  for (const NodeId u : members) {
    if (u == v) {
      throw std::invalid_argument("neighborhood_components: node " + std::to_string(v) +
                                  " must not appear in its own neighbor subset");
    }
    if (!std::binary_search(nv.begin(), nv.end(), u)) {
      throw std::invalid_argument("neighborhood_components: " + std::to_string(u) +
                                  " is not a neighbor of " + std::to_string(v));
    }
  }

  NeighborComponents result;
  if (members.empty()) return result;

  // BFS over the induced subgraph. Membership tests run on the sorted member
  // list, so only edges with both endpoints inside the subset are followed.
  std::vector<bool> visited(members.size(), false);
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < members.size(); ++start) {
    if (visited[start]) continue;
    std::vector<NodeId> component;
    queue.clear();
    queue.push_back(start);
    visited[start] = true;
    while (!queue.empty()) {
      const std::size_t idx = queue.back();
      queue.pop_back();
      component.push_back(members[idx]);
      for (const NodeId w : g.neighbors(members[idx])) {
        const auto it = std::lower_bound(members.begin(), members.end(), w);
        if (it == members.end() || *it != w) continue;
        const auto widx = static_cast<std::size_t>(it - members.begin());
        if (!visited[widx]) {
          visited[widx] = true;
          queue.push_back(widx);
        }
      }
    }
    std::sort(component.begin(), component.end());
    result.components.push_back(std::move(component));
  }
  // Scanning members in ascending order discovers components in order of
  // their smallest element already; no extra sort needed.
  return result;
}

std::vector<NodeId> sample_neighbors(const Graph& g, NodeId v, std::size_t fanout, Rng& rng) {
  if (fanout == 0) throw std::invalid_argument("sample_neighbors: fanout must be >= 1");
  const auto nb = g.neighbors(v);
  std::vector<NodeId> out(nb.begin(), nb.end());
  if (out.size() <= fanout) return out;
  // Partial Fisher-Yates: the first `fanout` slots end up a uniform subset.
  for (std::size_t i = 0; i < fanout; ++i) {
    const std::size_t j = i + rng.uniform_index(out.size() - i);
    std::swap(out[i], out[j]);
  }
  out.resize(fanout);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace citegraph
