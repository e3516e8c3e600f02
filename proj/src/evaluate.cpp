#include "citegraph/evaluate.hpp"

#include <cmath>
#include <stdexcept>

#include "citegraph/error.hpp"

namespace citegraph {

Vector edge_feature(std::span<const double> z_u, std::span<const double> z_v) {
  return hadamard(z_u, z_v);
}

namespace {

Matrix feature_matrix(const Matrix& emb, const std::vector<Edge>& pos, const std::vector<Edge>& neg,
                      std::vector<std::uint8_t>& labels) {
  Matrix x(pos.size() + neg.size(), emb.cols());
  labels.assign(pos.size() + neg.size(), 0);
  std::size_t row = 0;
  for (const auto& [u, v] : pos) {
    x.set_row(row, edge_feature(emb.row(u), emb.row(v)));
    labels[row++] = 1;
  }
  for (const auto& [u, v] : neg) {
    x.set_row(row, edge_feature(emb.row(u), emb.row(v)));
    ++row;
  }
  return x;
}

}  // namespace

RepeatMetrics evaluate_split(const Matrix& embeddings, const EdgeSplit& split,
                             const QuadrantAssignment& quadrants, const MlpConfig& mlp_cfg) {
  const std::size_t n_test = split.test_pos.size() + split.test_neg.size();
  if (quadrants.quadrant.size() != n_test) {
    throw ConfigError("evaluate_split: quadrant assignment does not cover the test edges");
  }

  std::vector<std::uint8_t> y_train, y_val, y_test;
  const Matrix x_train = feature_matrix(embeddings, split.train_pos, split.train_neg, y_train);
  const Matrix x_val = feature_matrix(embeddings, split.val_pos, split.val_neg, y_val);
  const Matrix x_test = feature_matrix(embeddings, split.test_pos, split.test_neg, y_test);

  const MlpTrainResult trained = train_mlp(x_train, y_train, x_val, y_val, mlp_cfg);
  const std::vector<double> scores = mlp_score_batch(trained.params, x_test);

  RepeatMetrics out;
  out.classifier_val_auc = trained.best_val_auc;
  out.network_threshold = quadrants.network_threshold;
  out.topic_threshold = quadrants.topic_threshold;
  out.overall = compute_metrics(scores, y_test);

  for (std::size_t q = 0; q < kNumQuadrants; ++q) {
    std::vector<double> qs;
    std::vector<std::uint8_t> qy;
    for (std::size_t i = 0; i < n_test; ++i) {
      if (static_cast<std::size_t>(quadrants.quadrant[i]) != q) continue;
      qs.push_back(scores[i]);
      qy.push_back(y_test[i]);
      if (y_test[i] != 0) ++out.quadrant_pos[q];
      else ++out.quadrant_neg[q];
    }
    if (out.quadrant_pos[q] > 0 && out.quadrant_neg[q] > 0) {
      out.quadrant[q] = compute_metrics(qs, qy);
    }
  }
  return out;
}

Aggregate aggregate_values(const std::vector<double>& values) {
  Aggregate a;
  a.n = values.size();
  if (values.empty()) {
    a.mean = std::nan("");
    a.sd = std::nan("");
    return a;
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) sq += (v - a.mean) * (v - a.mean);
  a.sd = std::sqrt(sq / static_cast<double>(values.size()));
  return a;
}

Aggregate aggregate_metric(const std::vector<RepeatMetrics>& repeats, std::size_t region,
                           std::size_t metric_idx) {
  std::vector<double> values;
  for (const auto& r : repeats) {
    if (region == 0) {
      values.push_back(metric_by_index(r.overall, metric_idx));
    } else if (r.quadrant[region - 1].has_value()) {
      values.push_back(metric_by_index(*r.quadrant[region - 1], metric_idx));
    }
  }
  return aggregate_values(values);
}

}  // namespace citegraph
