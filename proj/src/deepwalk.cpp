#include "citegraph/deepwalk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citegraph/error.hpp"

namespace citegraph {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
}  // namespace

void WalkConfig::validate() const {
  if (walk_length < 2) throw ConfigError("deepwalk: walk_length must be >= 2");
  if (window < 1) throw ConfigError("deepwalk: window must be >= 1");
  if (embed_dim == 0 || walks_per_node == 0 || epochs == 0) {
    throw ConfigError("deepwalk: embed_dim, walks_per_node and epochs must be >= 1");
  }
  if (learning_rate <= 0.0) throw ConfigError("deepwalk: learning_rate must be > 0");
}

std::vector<std::vector<NodeId>> generate_walks(const Graph& g, const WalkConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<std::vector<NodeId>> walks;
  walks.reserve(static_cast<std::size_t>(g.num_nodes()) * cfg.walks_per_node);
  for (NodeId start = 0; start < g.num_nodes(); ++start) {
    for (std::size_t w = 0; w < cfg.walks_per_node; ++w) {
      std::vector<NodeId> walk;
      walk.reserve(cfg.walk_length);
      walk.push_back(start);
      while (walk.size() < cfg.walk_length) {
        const auto nb = g.neighbors(walk.back());
        if (nb.empty()) break;
        walk.push_back(nb[rng.uniform_index(nb.size())]);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

double skipgram_group_loss(std::span<const double> center, std::span<const double> pos_context,
                           const std::vector<std::span<const double>>& neg_contexts) {
  double loss = softplus(-dot(center, pos_context));
  for (const auto& neg : neg_contexts) loss += softplus(dot(center, neg));
  return loss;
}

void skipgram_group_grads(std::span<const double> center, std::span<const double> pos_context,
                          const std::vector<std::span<const double>>& neg_contexts,
                          std::span<double> d_center, std::span<double> d_pos,
                          const std::vector<std::span<double>>& d_negs) {
  const double g_pos = sigmoid(dot(center, pos_context)) - 1.0;
  axpy(g_pos, pos_context, d_center);
  axpy(g_pos, center, d_pos);
  for (std::size_t i = 0; i < neg_contexts.size(); ++i) {
    const double g_neg = sigmoid(dot(center, neg_contexts[i]));
    axpy(g_neg, neg_contexts[i], d_center);
    axpy(g_neg, center, d_negs[i]);
  }
}

Matrix skipgram_train(const std::vector<std::vector<NodeId>>& walks, NodeId num_nodes,
                      const WalkConfig& cfg, Rng& rng) {
  cfg.validate();
  if (walks.empty()) throw ConfigError("skipgram_train: no walks");

  // Unigram^(3/4) cumulative table over walk occurrences.
  std::vector<double> counts(num_nodes, 0.0);
  std::size_t total_pairs = 0;
  for (const auto& walk : walks) {
    for (const NodeId v : walk) counts[v] += 1.0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
      const std::size_t hi = std::min(walk.size(), i + cfg.window + 1);
      total_pairs += hi - lo - 1;
    }
  }
  std::vector<double> cumulative(num_nodes);
  double acc = 0.0;
  for (NodeId v = 0; v < num_nodes; ++v) {
    acc += std::pow(counts[v], 0.75);
    cumulative[v] = acc;
  }
  if (acc <= 0.0) throw ConfigError("skipgram_train: walks contain no nodes");
  auto sample_negative = [&]() -> NodeId {
    const double x = rng.uniform() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<NodeId>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), num_nodes - 1));
  };

  Matrix w_in(num_nodes, cfg.embed_dim);
  Matrix w_out(num_nodes, cfg.embed_dim);  // context table, discarded at the end
  for (double& x : w_in.data()) x = (rng.uniform() - 0.5) / static_cast<double>(cfg.embed_dim);

  std::vector<std::size_t> walk_order(walks.size());
  std::iota(walk_order.begin(), walk_order.end(), std::size_t{0});

  const double total_updates = static_cast<double>(total_pairs) * static_cast<double>(cfg.epochs);
  const double alpha_floor = cfg.learning_rate * 1e-4;
  std::size_t done = 0;

  Vector d_center(cfg.embed_dim);
  std::vector<NodeId> negs(cfg.negatives);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(walk_order);
    for (const std::size_t wi : walk_order) {
      const auto& walk = walks[wi];
      for (std::size_t i = 0; i < walk.size(); ++i) {
        const NodeId center = walk[i];
        const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
        const std::size_t hi = std::min(walk.size(), i + cfg.window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const NodeId context = walk[j];
          const double alpha =
              std::max(alpha_floor,
                       cfg.learning_rate * (1.0 - static_cast<double>(done) / total_updates));
          ++done;

          std::size_t n_negs = 0;
          for (std::size_t t = 0; t < cfg.negatives; ++t) {
            NodeId neg = 0;
            bool found = false;
            for (int attempt = 0; attempt < 100; ++attempt) {
              neg = sample_negative();
              if (neg != center && neg != context) {
                found = true;
                break;
              }
            }
            if (found) negs[n_negs++] = neg;
          }

          // One SGD step on the group loss; the context rows update
          // immediately, the center row once per group (word2vec order).
          std::fill(d_center.begin(), d_center.end(), 0.0);
          auto c_row = w_in.row(center);
          {
            auto p_row = w_out.row(context);
            const double g = sigmoid(dot(c_row, p_row)) - 1.0;
            axpy(g, p_row, d_center);
            axpy(-alpha * g, c_row, p_row);
          }
          for (std::size_t t = 0; t < n_negs; ++t) {
            auto n_row = w_out.row(negs[t]);
            const double g = sigmoid(dot(c_row, n_row));
            axpy(g, n_row, d_center);
            axpy(-alpha * g, c_row, n_row);
          }
          axpy(-alpha, d_center, c_row);
        }
      }
    }
  }
  if (!w_in.all_finite()) throw NumericError("skipgram_train: non-finite embedding values");
  return w_in;
}

Matrix deepwalk_embed(const Graph& g, const WalkConfig& cfg) {
  Rng walk_rng(derive_seed(cfg.seed, "deepwalk/walks"));
  const auto walks = generate_walks(g, cfg, walk_rng);
  Rng train_rng(derive_seed(cfg.seed, "deepwalk/train"));
  return skipgram_train(walks, g.num_nodes(), cfg, train_rng);
}

}  // namespace citegraph
