#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace citegraph {

struct MetricValues {
  double auc_roc = 0.0;
  double auprc = 0.0;
  double average_precision = 0.0;
  double macro_f1 = 0.0;
  double balanced_accuracy = 0.0;
};

inline constexpr const char* kMetricNames[] = {"auc_roc", "auprc", "average_precision", "macro_f1",
                                               "balanced_accuracy"};
inline constexpr std::size_t kNumMetrics = 5;

double metric_by_index(const MetricValues& m, std::size_t idx);

// Scores against binary labels (1 = positive). Requires at least one label
// of each class (throws std::invalid_argument otherwise).
//   auc_roc:            rank statistic; tied scores count half.
//   auprc:              trapezoidal area under the precision-recall curve,
//                       one point per distinct threshold, anchored at (0, 1).
//   average_precision:  step-sum  sum_k (R_k - R_{k-1}) * P_k.
//   macro_f1 /
//   balanced_accuracy:  thresholded at 0.5 (score >= 0.5 predicts positive).
MetricValues compute_metrics(std::span<const double> scores, std::span<const std::uint8_t> labels);

}  // namespace citegraph
