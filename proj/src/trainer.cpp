#include "citegraph/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citegraph/error.hpp"

namespace citegraph {

namespace {
double softplus(double x) {
  // log(1 + e^x) without overflow.
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

double logistic_edge_loss(double dot, bool positive) {
  return positive ? softplus(-dot) : softplus(dot);
}

double logistic_edge_loss_grad(double dot, bool positive) {
  return sigmoid(dot) - (positive ? 1.0 : 0.0);
}

namespace {

Vector layer_forward_dispatch(const Graph& g, const Matrix& h_prev, const CombLayerParams& p,
                              NodeId v, const std::vector<NodeId>& sampled, Rng* order_rng,
                              CombLayerState& st) {
  return combsage_layer_forward(g, h_prev, p, v, sampled, order_rng, st);
}
Vector layer_forward_dispatch(const Graph&, const Matrix& h_prev, const SageLayerParams& p, NodeId v,
                              const std::vector<NodeId>& sampled, Rng* order_rng,
                              SageLayerState& st) {
  return graphsage_layer_forward(h_prev, p, v, sampled, order_rng, st);
}

void layer_backward_dispatch(const CombLayerParams& p, const CombLayerState& st,
                             const Matrix& h_prev, const Vector& d_out, CombLayerParams& grads,
                             Matrix* d_h_prev) {
  combsage_layer_backward(p, st, h_prev, d_out, grads, d_h_prev);
}
void layer_backward_dispatch(const SageLayerParams& p, const SageLayerState& st,
                             const Matrix& h_prev, const Vector& d_out, SageLayerParams& grads,
                             Matrix* d_h_prev) {
  graphsage_layer_backward(p, st, h_prev, d_out, grads, d_h_prev);
}

bool row_is_zero(std::span<const double> row) {
  for (const double x : row) {
    if (x != 0.0) return false;
  }
  return true;
}

// Reused across batch steps; level 0 is the input feature matrix.
template <typename StateT>
struct BatchWorkspace {
  std::vector<Matrix> h;   // per level node states (rows outside the active
  std::vector<Matrix> dh;  // sets stay zero and are never read)
  std::vector<std::vector<NodeId>> need;  // active node set per level
  std::vector<std::vector<StateT>> states;

  template <typename LayerT>
  void init(const Matrix& features, const std::vector<LayerT>& layers, NodeId n) {
    const std::size_t num_layers = layers.size();
    h.resize(num_layers + 1);
    dh.resize(num_layers + 1);
    h[0] = features;
    for (std::size_t k = 0; k < num_layers; ++k) {
      h[k + 1] = Matrix(n, layers[k].out_dim);
      dh[k + 1] = Matrix(n, layers[k].out_dim);
    }
    need.resize(num_layers + 1);
    states.resize(num_layers);
  }
};

// Forward + loss + backward for one example batch. Gradients accumulate into
// grad_layers; returns the summed (not yet averaged) loss. Deterministic
// given the rng call sequence.
template <typename LayerT, typename StateT>
double run_batch(const Graph& g, const GnnArch& arch, const std::vector<LayerT>& layers,
                 std::vector<LayerT>& grad_layers, const std::vector<EdgeExample>& examples,
                 Rng* sample_rng, Rng* lstm_order_rng, BatchWorkspace<StateT>& ws) {
  const std::size_t num_layers = layers.size();

  // Receptive-field plan, outermost level first.
  auto& top = ws.need[num_layers];
  top.clear();
  for (const auto& ex : examples) {
    top.push_back(ex.u);
    top.push_back(ex.v);
  }
  std::sort(top.begin(), top.end());
  top.erase(std::unique(top.begin(), top.end()), top.end());

  for (std::size_t k = num_layers; k-- > 0;) {
    ws.states[k].assign(ws.need[k + 1].size(), StateT{});
    ws.need[k] = ws.need[k + 1];
    for (std::size_t i = 0; i < ws.need[k + 1].size(); ++i) {
      const NodeId u = ws.need[k + 1][i];
      if (sample_rng != nullptr) {
        ws.states[k][i].sampled = sample_neighbors(g, u, arch.fanouts[k], *sample_rng);
      } else {
        const auto nb = g.neighbors(u);
        ws.states[k][i].sampled.assign(nb.begin(), nb.end());
      }
      ws.need[k].insert(ws.need[k].end(), ws.states[k][i].sampled.begin(),
                        ws.states[k][i].sampled.end());
    }
    std::sort(ws.need[k].begin(), ws.need[k].end());
    ws.need[k].erase(std::unique(ws.need[k].begin(), ws.need[k].end()), ws.need[k].end());
  }

  for (std::size_t k = 0; k < num_layers; ++k) {
    for (std::size_t i = 0; i < ws.need[k + 1].size(); ++i) {
      const NodeId u = ws.need[k + 1][i];
      const auto sampled = ws.states[k][i].sampled;
      const Vector out =
          layer_forward_dispatch(g, ws.h[k], layers[k], u, sampled, lstm_order_rng, ws.states[k][i]);
      ws.h[k + 1].set_row(u, out);
    }
  }

  for (std::size_t k = 1; k <= num_layers; ++k) {
    for (const NodeId u : ws.need[k]) {
      std::fill(ws.dh[k].row(u).begin(), ws.dh[k].row(u).end(), 0.0);
    }
  }

  const double inv_count = 1.0 / static_cast<double>(examples.size());
  auto embedding_of = [&](NodeId u) {
    if (!arch.jumping_knowledge) return ws.h[num_layers].row_copy(u);
    Vector z;
    for (std::size_t k = 1; k <= num_layers; ++k) {
      const auto row = ws.h[k].row(u);
      z.insert(z.end(), row.begin(), row.end());
    }
    return z;
  };
  auto add_dz = [&](NodeId u, const Vector& dz) {
    if (!arch.jumping_knowledge) {
      axpy(1.0, dz, ws.dh[num_layers].row(u));
      return;
    }
    std::size_t off = 0;
    for (std::size_t k = 1; k <= num_layers; ++k) {
      auto row = ws.dh[k].row(u);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += dz[off + i];
      off += row.size();
    }
  };

  double loss_sum = 0.0;
  for (const auto& ex : examples) {
    const Vector zu = embedding_of(ex.u);
    const Vector zv = embedding_of(ex.v);
    const double score = dot(zu, zv);
    loss_sum += logistic_edge_loss(score, ex.positive);
    const double dd = logistic_edge_loss_grad(score, ex.positive) * inv_count;
    Vector dzu(zv);
    for (double& x : dzu) x *= dd;
    Vector dzv(zu);
    for (double& x : dzv) x *= dd;
    add_dz(ex.u, dzu);
    add_dz(ex.v, dzv);
  }

  for (std::size_t k = num_layers; k-- > 0;) {
    for (std::size_t i = 0; i < ws.need[k + 1].size(); ++i) {
      const NodeId u = ws.need[k + 1][i];
      const auto d_row = ws.dh[k + 1].row(u);
      if (row_is_zero(d_row)) continue;
      const Vector d_out(d_row.begin(), d_row.end());
      layer_backward_dispatch(layers[k], ws.states[k][i], ws.h[k], d_out, grad_layers[k],
                              k > 0 ? &ws.dh[k] : nullptr);
    }
  }
  return loss_sum;
}

template <typename LayerT, typename StateT>
std::vector<double> train_impl(const Graph& g, const Matrix& features, const GnnArch& arch,
                               const TrainConfig& cfg, std::vector<LayerT>& layers,
                               std::vector<LayerT>& grad_layers, ParamRefs& params,
                               ParamRefs& grads) {
  const NodeId n = g.num_nodes();
  auto edges = g.edge_list();  // canonical order; input order cannot leak in
  const std::size_t total_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (edges.size() >= total_pairs) {
    throw ConfigError("train_unsupervised: graph is complete, no negative pairs exist");
  }

  Rng rng_order(derive_seed(cfg.seed, "train/order"));
  Rng rng_negative(derive_seed(cfg.seed, "train/negatives"));
  Rng rng_sample(derive_seed(cfg.seed, "train/sampling"));

  Adam adam(AdamConfig{.learning_rate = cfg.learning_rate});
  BatchWorkspace<StateT> ws;
  ws.init(features, layers, n);

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> epoch_loss;
  std::vector<EdgeExample> examples;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng_order.shuffle(order);
    double loss_sum = 0.0;
    std::size_t example_count = 0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      examples.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const auto [u, v] = edges[order[i]];
        examples.push_back({u, v, true});
        for (std::size_t t = 0; t < cfg.negatives_per_positive; ++t) {
          for (;;) {
            const auto a = static_cast<NodeId>(rng_negative.uniform_index(n));
            const auto b = static_cast<NodeId>(rng_negative.uniform_index(n));
            if (a == b || g.has_edge(a, b)) continue;
            examples.push_back({a, b, false});
            break;
          }
        }
      }

      loss_sum += run_batch<LayerT, StateT>(g, arch, layers, grad_layers, examples, &rng_sample,
                                            &rng_sample, ws);
      example_count += examples.size();
      if (!std::isfinite(loss_sum)) {
        throw NumericError("train_unsupervised: non-finite loss at epoch " + std::to_string(epoch));
      }
      adam.step(params, grads);
      grads.zero();
    }
    epoch_loss.push_back(loss_sum / static_cast<double>(example_count));
  }
  return epoch_loss;
}

}  // namespace

double model_loss_and_grads(const Graph& g, const Matrix& features, const GnnModel& model,
                            const std::vector<EdgeExample>& examples, GnnModel& grads,
                            Rng* sample_rng, Rng* lstm_order_rng) {
  if (examples.empty()) throw ConfigError("model_loss_and_grads: no examples");
  const double inv = 1.0 / static_cast<double>(examples.size());
  if (model.arch.kind == GnnKind::CombSage) {
    BatchWorkspace<CombLayerState> ws;
    ws.init(features, model.comb_layers, g.num_nodes());
    return inv * run_batch<CombLayerParams, CombLayerState>(g, model.arch, model.comb_layers,
                                                            grads.comb_layers, examples, sample_rng,
                                                            lstm_order_rng, ws);
  }
  BatchWorkspace<SageLayerState> ws;
  ws.init(features, model.sage_layers, g.num_nodes());
  return inv * run_batch<SageLayerParams, SageLayerState>(g, model.arch, model.sage_layers,
                                                          grads.sage_layers, examples, sample_rng,
                                                          lstm_order_rng, ws);
}

TrainResult train_unsupervised(const Graph& g, const Matrix& features, const GnnArch& arch,
                               const TrainConfig& cfg) {
  if (g.num_edges() == 0) {
    throw ConfigError("train_unsupervised: graph has no edges, nothing to train on");
  }
  TrainResult result;
  result.model = GnnModel::init(arch, derive_seed(cfg.seed, "train/init"));
  GnnModel grad_model = GnnModel::zeros_like(result.model);
  ParamRefs params, grads;
  result.model.collect_params(params);
  grad_model.collect_params(grads);

  if (arch.kind == GnnKind::CombSage) {
    result.epoch_mean_loss =
        train_impl<CombLayerParams, CombLayerState>(g, features, arch, cfg, result.model.comb_layers,
                                                    grad_model.comb_layers, params, grads);
  } else {
    result.epoch_mean_loss =
        train_impl<SageLayerParams, SageLayerState>(g, features, arch, cfg, result.model.sage_layers,
                                                    grad_model.sage_layers, params, grads);
  }
  return result;
}

}  // namespace citegraph
