#include "citegraph/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citegraph/error.hpp"
#include "citegraph/metrics.hpp"

namespace citegraph {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
}  // namespace

MlpParams MlpParams::init(std::size_t in_dim, std::size_t hidden, std::uint64_t seed) {
  Rng rng(seed);
  MlpParams p;
  p.w_hidden = Matrix(hidden, in_dim);
  glorot_init(p.w_hidden, in_dim, hidden, rng);
  p.b_hidden.assign(hidden, 0.0);
  Matrix out_row(1, hidden);
  glorot_init(out_row, hidden, 1, rng);
  p.w_out = out_row.row_copy(0);
  p.b_out = 0.0;
  return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& other) {
  MlpParams p;
  p.w_hidden = Matrix(other.w_hidden.rows(), other.w_hidden.cols());
  p.b_hidden.assign(other.b_hidden.size(), 0.0);
  p.w_out.assign(other.w_out.size(), 0.0);
  p.b_out = 0.0;
  return p;
}

void MlpParams::collect_params(ParamRefs& refs) {
  refs.add(w_hidden);
  refs.add(b_hidden);
  refs.add(w_out);
  refs.add(b_out);
}

double mlp_score(const MlpParams& params, std::span<const double> x) {
  Vector h = matvec(params.w_hidden, x);
  axpy(1.0, params.b_hidden, h);
  relu_inplace(h);
  return sigmoid(dot(params.w_out, h) + params.b_out);
}

std::vector<double> mlp_score_batch(const MlpParams& params, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = mlp_score(params, x.row(i));
  return out;
}

double mlp_loss_and_grads(const MlpParams& params, const Matrix& x,
                          std::span<const std::uint8_t> y, MlpParams& grads) {
  const std::size_t n = x.rows();
  const double inv = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  Vector h(params.b_hidden.size());
  Vector dh(h.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    Vector pre = matvec(params.w_hidden, xi);
    axpy(1.0, params.b_hidden, pre);
    h = relu(pre);
    const double logit = dot(params.w_out, h) + params.b_out;
    loss += y[i] != 0 ? softplus(-logit) : softplus(logit);

    const double d_logit = (sigmoid(logit) - (y[i] != 0 ? 1.0 : 0.0)) * inv;
    axpy(d_logit, h, grads.w_out);
    grads.b_out += d_logit;
    for (std::size_t k = 0; k < h.size(); ++k) {
      dh[k] = pre[k] > 0.0 ? d_logit * params.w_out[k] : 0.0;
    }
    add_outer(grads.w_hidden, dh, xi);
    axpy(1.0, dh, grads.b_hidden);
  }
  return loss * inv;
}

MlpTrainResult train_mlp(const Matrix& x_train, std::span<const std::uint8_t> y_train,
                         const Matrix& x_val, std::span<const std::uint8_t> y_val,
                         const MlpConfig& cfg) {
  if (x_train.rows() == 0) throw ConfigError("train_mlp: empty training set");
  if (x_train.rows() != y_train.size()) throw ConfigError("train_mlp: x/y size mismatch");

  MlpTrainResult result;
  result.params = MlpParams::init(x_train.cols(), cfg.hidden, derive_seed(cfg.seed, "mlp/init"));
  MlpParams grads = MlpParams::zeros_like(result.params);
  ParamRefs prefs, grefs;
  result.params.collect_params(prefs);
  grads.collect_params(grefs);
  Adam adam(AdamConfig{.learning_rate = cfg.learning_rate});

  const bool use_val = x_val.rows() > 0;
  MlpParams best = result.params;
  double best_auc = -1.0;
  std::size_t best_epoch = 0;
  std::size_t since_best = 0;

  Rng order_rng(derive_seed(cfg.seed, "mlp/order"));
  std::vector<std::size_t> order(x_train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t epoch = 0;
  for (; epoch < cfg.max_epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      Matrix xb(stop - start, x_train.cols());
      std::vector<std::uint8_t> yb(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        xb.set_row(i - start, x_train.row(order[i]));
        yb[i - start] = y_train[order[i]];
      }
      const double loss = mlp_loss_and_grads(result.params, xb, yb, grads);
      if (!std::isfinite(loss)) throw NumericError("train_mlp: non-finite loss");
      adam.step(prefs, grefs);
      grefs.zero();
    }

    if (use_val) {
      const auto val_scores = mlp_score_batch(result.params, x_val);
      const double auc = compute_metrics(val_scores, y_val).auc_roc;
      if (auc > best_auc) {
        best_auc = auc;
        best = result.params;
        best_epoch = epoch;
        since_best = 0;
      } else if (++since_best > cfg.patience) {
        ++epoch;
        break;
      }
    }
  }

  result.epochs_run = epoch;
  if (use_val) {
    result.params = best;
    result.best_val_auc = best_auc;
    result.best_epoch = best_epoch;
  }
  return result;
}

}  // namespace citegraph
