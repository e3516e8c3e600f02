#pragma once

#include <cstdint>
#include <vector>

#include "citegraph/adam.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

// Binary classifier over edge features: one hidden relu layer, logistic
// output. Trained with Adam on BCE; early stopping keeps the parameters of
// the epoch with the best validation AUC.
struct MlpParams {
  Matrix w_hidden;  // hidden x in_dim
  Vector b_hidden;
  Vector w_out;  // hidden
  double b_out = 0.0;

  static MlpParams init(std::size_t in_dim, std::size_t hidden, std::uint64_t seed);
  static MlpParams zeros_like(const MlpParams& other);
  void collect_params(ParamRefs& refs);
};

struct MlpConfig {
  std::size_t hidden = 64;
  std::size_t max_epochs = 200;
  std::size_t batch_size = 256;
  std::size_t patience = 10;  // epochs without val-AUC improvement
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

// Probability that x is a positive edge.
double mlp_score(const MlpParams& params, std::span<const double> x);
std::vector<double> mlp_score_batch(const MlpParams& params, const Matrix& x);

// Mean BCE over the batch; accumulates parameter gradients into `grads`.
double mlp_loss_and_grads(const MlpParams& params, const Matrix& x,
                          std::span<const std::uint8_t> y, MlpParams& grads);

struct MlpTrainResult {
  MlpParams params;
  double best_val_auc = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
};

// `x_val`/`y_val` drive early stopping; pass an empty matrix to train for
// the full max_epochs. Deterministic given cfg.seed.
MlpTrainResult train_mlp(const Matrix& x_train, std::span<const std::uint8_t> y_train,
                         const Matrix& x_val, std::span<const std::uint8_t> y_val,
                         const MlpConfig& cfg);

}  // namespace citegraph
