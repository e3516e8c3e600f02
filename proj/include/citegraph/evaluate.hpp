#pragma once

#include <array>
#include <optional>
#include <vector>

#include "citegraph/edge_split.hpp"
#include "citegraph/metrics.hpp"
#include "citegraph/mlp.hpp"
#include "citegraph/quadrant.hpp"

namespace citegraph {

// Hadamard feature of an edge's endpoint embeddings; symmetric in u, v.
Vector edge_feature(std::span<const double> z_u, std::span<const double> z_v);

// Metrics of one split repeat: overall plus a per-quadrant stratification of
// the same test predictions. A quadrant whose test edges are single-class
// has no defined metrics and stays empty.
struct RepeatMetrics {
  MetricValues overall;
  std::array<std::optional<MetricValues>, kNumQuadrants> quadrant;
  std::array<std::size_t, kNumQuadrants> quadrant_pos{};  // positive test edges per region
  std::array<std::size_t, kNumQuadrants> quadrant_neg{};
  double network_threshold = 0.0;
  double topic_threshold = 0.0;
  double classifier_val_auc = 0.0;
};

// Trains the edge classifier (train split features, early stopping on the
// validation split), scores the test split, and stratifies by quadrant.
// The quadrant assignment must cover test_pos followed by test_neg, in order.
RepeatMetrics evaluate_split(const Matrix& embeddings, const EdgeSplit& split,
                             const QuadrantAssignment& quadrants, const MlpConfig& mlp_cfg);

// Mean and standard deviation (population) of one metric across repeats;
// n counts the repeats where the metric was defined.
struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

Aggregate aggregate_values(const std::vector<double>& values);

// region: 0 = overall, 1..4 = quadrants (LowLow..HighHigh order).
Aggregate aggregate_metric(const std::vector<RepeatMetrics>& repeats, std::size_t region,
                           std::size_t metric_idx);

}  // namespace citegraph
