// Shared helpers for the test suites: independent oracles (kept free of the
// library's implementation paths) and random-case generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"
#include "citegraph/rng.hpp"

namespace testsupport {

using citegraph::Edge;
using citegraph::Graph;
using citegraph::NodeId;
using citegraph::Rng;

// Erdos-Renyi G(n, p) edge list.
inline std::vector<Edge> random_edges(NodeId n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return edges;
}

// Brute-force connected components of the subgraph induced by `subset`,
// via repeated set-based BFS over an explicit adjacency check. Independent
// of the library's union-find/BFS ordering choices.
inline std::vector<std::vector<NodeId>> oracle_components(const Graph& g,
                                                          std::vector<NodeId> subset) {
  std::sort(subset.begin(), subset.end());
  std::set<NodeId> remaining(subset.begin(), subset.end());
  std::vector<std::vector<NodeId>> result;
  while (!remaining.empty()) {
    const NodeId seed = *remaining.begin();
    std::set<NodeId> comp;
    std::vector<NodeId> frontier{seed};
    remaining.erase(seed);
    comp.insert(seed);
    while (!frontier.empty()) {
      const NodeId v = frontier.back();
      frontier.pop_back();
      for (const NodeId u : subset) {
        if (comp.count(u) != 0) continue;
        const auto nb = g.neighbors(v);
        if (std::find(nb.begin(), nb.end(), u) != nb.end()) {
          comp.insert(u);
          remaining.erase(u);
          frontier.push_back(u);
        }
      }
    }
    result.emplace_back(comp.begin(), comp.end());
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

// Brute-force AUC: concordant positive/negative pairs, ties counted half.
inline double oracle_auc(const std::vector<double>& scores, const std::vector<uint8_t>& labels) {
  double num = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) num += 1.0;
      else if (scores[i] == scores[j]) num += 0.5;
    }
  }
  return num / static_cast<double>(pairs);
}

// Brute-force average precision from the sorted score list: walk distinct
// thresholds descending and step-sum precision against recall increments.
inline double oracle_average_precision(std::vector<double> scores, std::vector<uint8_t> labels) {
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::size_t total_pos = 0;
  for (const auto y : labels) total_pos += y != 0 ? 1 : 0;
  double ap = 0.0;
  std::size_t tp = 0, seen = 0, prev_tp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) tp += labels[idx[k]] != 0 ? 1 : 0;
    seen = j;
    const double recall_step =
        static_cast<double>(tp - prev_tp) / static_cast<double>(total_pos);
    ap += recall_step * (static_cast<double>(tp) / static_cast<double>(seen));
    prev_tp = tp;
    i = j;
  }
  return ap;
}

inline citegraph::Vector random_vector(std::size_t dim, Rng& rng, double scale = 1.0) {
  citegraph::Vector v(dim);
  for (double& x : v) x = rng.normal() * scale;
  return v;
}

inline citegraph::Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                                       double scale = 1.0) {
  citegraph::Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.normal() * scale;
  return m;
}

// Finite differences are invalid across relu kinks and max-pool argmax ties:
// a +-eps parameter bump can flip the active piece. Generated check cases
// are rejected unless every relu pre-activation and every pooled top-2 gap
// clears this margin (perturbations move pre-activations by O(eps * |h|),
// orders of magnitude below it).
inline constexpr double kKinkMargin = 1e-3;

// Central differences at eps on a loss of magnitude L carry roundoff noise
// ~ L * 2^-52 / eps in each numeric gradient. The check formula divides by
// max(1e-8, |g_a| + |g_n|), so coordinates whose true gradient is below the
// 1e-8 floor would read noise/1e-8 as "error". Scaling the probe functional
// to this magnitude pushes the noise floor two orders below the tolerances
// while leaving the relative precision of every real coordinate unchanged.
inline constexpr double kCheckScale = 1e-3;

inline citegraph::Vector check_direction(std::size_t dim, Rng& rng) {
  citegraph::Vector r = random_vector(dim, rng);
  const double norm = citegraph::l2_norm(r);
  for (double& x : r) x = x / norm * kCheckScale;
  return r;
}

inline bool relu_margin_ok(const citegraph::Vector& pre, double margin = kKinkMargin) {
  for (const double x : pre) {
    if (std::abs(x) < margin) return false;
  }
  return true;
}

// Top-2 gap per output coordinate of relu'd pooled projections; also treats
// a max near zero as a kink (the relu and the max interact there).
inline bool maxpool_margin_ok(const std::vector<citegraph::Vector>& pool_pre,
                              double margin = kKinkMargin) {
  if (pool_pre.empty()) return true;
  const std::size_t dim = pool_pre.front().size();
  for (std::size_t i = 0; i < dim; ++i) {
    double best = -1e300, second = -1e300;
    for (const auto& pre : pool_pre) {
      const double a = pre[i] > 0.0 ? pre[i] : 0.0;
      if (a > best) {
        second = best;
        best = a;
      } else if (a > second) {
        second = a;
      }
    }
    if (pool_pre.size() > 1 && best - second < margin) return false;
    for (const auto& pre : pool_pre) {
      if (std::abs(pre[i]) < margin) return false;
    }
  }
  return true;
}

}  // namespace testsupport
