#include "citegraph/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citegraph/error.hpp"

namespace citegraph {

void SynthConfig::validate() const {
  if (num_communities == 0 || community_size == 0) {
    throw ConfigError("synthetic config: num_communities and community_size must be >= 1");
  }
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw ConfigError("synthetic config: require 0 <= p_out < p_in <= 1");
  }
  if (bridge_fraction < 0.0 || bridge_fraction > 1.0) {
    throw ConfigError("synthetic config: bridge_fraction must be in [0, 1]");
  }
  if (feature_dim == 0) throw ConfigError("synthetic config: feature_dim must be >= 1");
  if (bridge_fraction > 0.0 && num_communities < 2) {
    throw ConfigError("synthetic config: bridges require at least 2 communities");
  }
  if (bridge_degree_boost > community_size) {
    throw ConfigError("synthetic config: bridge_degree_boost exceeds community size");
  }
}

namespace {

// Nodes of the largest connected component, sorted ascending.
std::vector<NodeId> largest_component(const Graph& g) {
  const NodeId n = g.num_nodes();
  std::vector<std::int32_t> comp(n, -1);
  std::int32_t n_comps = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const std::int32_t c = n_comps++;
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (const NodeId w : g.neighbors(v)) {
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<std::size_t> size(static_cast<std::size_t>(n_comps), 0);
  for (NodeId v = 0; v < n; ++v) ++size[static_cast<std::size_t>(comp[v])];
  const auto best = static_cast<std::int32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] == best) keep.push_back(v);
  }
  return keep;
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.num_nodes();
  const auto community_of = [&](std::size_t v) {
    return static_cast<std::uint32_t>(v / cfg.community_size);
  };

  SynthData data;
  data.labels.community.resize(n);
  data.labels.is_bridge.assign(n, 0);
  data.bridge_target.assign(n, -1);
  for (std::size_t v = 0; v < n; ++v) data.labels.community[v] = community_of(v);

  // Block-model edges.
  Rng edge_rng(derive_seed(cfg.seed, "synth/edges"));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = community_of(i) == community_of(j) ? cfg.p_in : cfg.p_out;
      if (edge_rng.uniform() < p) {
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
      }
    }
  }

  // Bridge designation and boost edges. Each bridge picks ONE foreign
  // community and gains bridge_degree_boost distinct neighbors there.
  Rng bridge_rng(derive_seed(cfg.seed, "synth/bridges"));
  const auto bridges_per_comm = static_cast<std::size_t>(
      std::llround(cfg.bridge_fraction * static_cast<double>(cfg.community_size)));
  for (std::size_t k = 0; k < cfg.num_communities; ++k) {
    std::vector<std::size_t> members(cfg.community_size);
    std::iota(members.begin(), members.end(), k * cfg.community_size);
    bridge_rng.shuffle(members);
    for (std::size_t b = 0; b < bridges_per_comm; ++b) {
      const std::size_t v = members[b];
      data.labels.is_bridge[v] = 1;
      std::size_t target = bridge_rng.uniform_index(cfg.num_communities - 1);
      if (target >= k) ++target;  // any community but the home one
      data.bridge_target[v] = static_cast<std::int32_t>(target);

      std::vector<std::size_t> candidates(cfg.community_size);
      std::iota(candidates.begin(), candidates.end(), target * cfg.community_size);
      for (std::size_t e = 0; e < cfg.bridge_degree_boost; ++e) {
        const std::size_t pick = e + bridge_rng.uniform_index(candidates.size() - e);
        std::swap(candidates[e], candidates[pick]);
        edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(candidates[e]));
      }
    }
  }

  data.graph = Graph::from_edges(edges, static_cast<NodeId>(n));

  // Features: community centers on a sphere of radius center_separation,
  // bridge nodes at the midpoint of their two centers, plus Gaussian noise.
  Rng feat_rng(derive_seed(cfg.seed, "synth/features"));
  std::vector<Vector> centers(cfg.num_communities);
  for (auto& c : centers) {
    c.resize(cfg.feature_dim);
    for (double& x : c) x = feat_rng.normal();
    const double norm = l2_norm(c);
    for (double& x : c) x = x / norm * cfg.center_separation;
  }
  data.features = Matrix(n, cfg.feature_dim);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& home = centers[data.labels.community[v]];
    for (std::size_t i = 0; i < cfg.feature_dim; ++i) {
      double mean = home[i];
      if (data.labels.is_bridge[v] != 0) {
        mean = 0.5 * (home[i] + centers[static_cast<std::size_t>(data.bridge_target[v])][i]);
      }
      data.features(v, i) = mean + cfg.feature_noise * feat_rng.normal();
    }
  }

  if (cfg.largest_component_only) {
    const auto keep = largest_component(data.graph);
    std::vector<std::uint32_t> new_id(n, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) new_id[keep[i]] = static_cast<std::uint32_t>(i);
    std::vector<Edge> kept_edges;
    for (const auto& [u, v] : data.graph.edge_list()) {
      // Both endpoints of any surviving edge are in the same component.
      if (std::binary_search(keep.begin(), keep.end(), u)) {
        kept_edges.emplace_back(new_id[u], new_id[v]);
      }
    }
    SynthData filtered;
    filtered.graph = Graph::from_edges(kept_edges, static_cast<NodeId>(keep.size()));
    filtered.features = Matrix(keep.size(), cfg.feature_dim);
    filtered.labels.community.resize(keep.size());
    filtered.labels.is_bridge.resize(keep.size());
    filtered.bridge_target.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      filtered.features.set_row(i, data.features.row(keep[i]));
      filtered.labels.community[i] = data.labels.community[keep[i]];
      filtered.labels.is_bridge[i] = data.labels.is_bridge[keep[i]];
      filtered.bridge_target[i] = data.bridge_target[keep[i]];
    }
    return filtered;
  }
  return data;
}

}  // namespace citegraph
