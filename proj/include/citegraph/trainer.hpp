#pragma once

#include <cstdint>
#include <vector>

#include "citegraph/model.hpp"

namespace citegraph {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  std::size_t negatives_per_positive = 1;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

struct TrainResult {
  GnnModel model;
  std::vector<double> epoch_mean_loss;  // retained for reporting
};

// Binary cross-entropy of the logistic edge score s = sigmoid(z_u . z_v),
// computed in the numerically stable softplus form.
double logistic_edge_loss(double dot, bool positive);
// d(loss)/d(dot) = sigmoid(dot) - y.
double logistic_edge_loss_grad(double dot, bool positive);

struct EdgeExample {
  NodeId u = 0, v = 0;
  bool positive = true;
};

// One training step's loss: mean BCE of the logistic edge scores over
// `examples`, with parameter gradients accumulated into `grads` (a
// zeros_like twin of `model`). Layer k samples fanouts[k] neighbors from
// `sample_rng`; pass nullptr to use full neighborhoods. `lstm_order_rng`
// shuffles LSTM aggregator input (nullptr = deterministic sorted order).
// This is the exact quantity the trainer descends, exposed so whole-model
// gradients can be verified directly.
double model_loss_and_grads(const Graph& g, const Matrix& features, const GnnModel& model,
                            const std::vector<EdgeExample>& examples, GnnModel& grads,
                            Rng* sample_rng, Rng* lstm_order_rng);

// Minimizes BCE over edge scores: positives are the graph's own edges, each
// supplemented with `negatives_per_positive` uniform non-edges. Mini-batch
// Adam; bit-deterministic given cfg.seed; invariant to edge input order
// (edges are canonicalized before batching). Throws ConfigError on a graph
// with no edges, NumericError if the loss leaves the finite range.
TrainResult train_unsupervised(const Graph& g, const Matrix& features, const GnnArch& arch,
                               const TrainConfig& cfg);

}  // namespace citegraph
