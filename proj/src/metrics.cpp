#include "citegraph/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace citegraph {

double metric_by_index(const MetricValues& m, std::size_t idx) {
  switch (idx) {
    case 0: return m.auc_roc;
    case 1: return m.auprc;
    case 2: return m.average_precision;
    case 3: return m.macro_f1;
    case 4: return m.balanced_accuracy;
  }
  throw std::invalid_argument("metric_by_index: bad index");
}

MetricValues compute_metrics(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("compute_metrics: scores/labels size mismatch");
  }
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (const auto y : labels) n_pos += y != 0 ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("compute_metrics: need at least one label of each class");
  }

  MetricValues out;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  // AUC-ROC from the Mann-Whitney rank sum; tie groups share their average
  // rank, which counts tied positive/negative pairs as half concordant.
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] != 0) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(n_pos);
  const double q = static_cast<double>(n_neg);
  out.auc_roc = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * q);

  // Precision-recall sweep over distinct thresholds, descending.
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double prev_recall = 0.0;
  double prev_precision = 1.0;
  double auprc = 0.0;
  double ap = 0.0;
  std::size_t tp = 0;
  std::size_t predicted = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] != 0) ++tp;
    }
    predicted += j - i;
    const double recall = static_cast<double>(tp) / p;
    const double precision = static_cast<double>(tp) / static_cast<double>(predicted);
    auprc += (recall - prev_recall) * 0.5 * (precision + prev_precision);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    prev_precision = precision;
    i = j;
  }
  out.auprc = auprc;
  out.average_precision = ap;

  // Confusion counts at threshold 0.5.
  std::size_t tp5 = 0, fp5 = 0, tn5 = 0, fn5 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pred = scores[i] >= 0.5;
    const bool actual = labels[i] != 0;
    if (pred && actual) ++tp5;
    else if (pred && !actual) ++fp5;
    else if (!pred && !actual) ++tn5;
    else ++fn5;
  }
  const auto f1 = [](std::size_t tp_, std::size_t fp_, std::size_t fn_) {
    const double denom = static_cast<double>(2 * tp_ + fp_ + fn_);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp_) / denom;
  };
  out.macro_f1 = 0.5 * (f1(tp5, fp5, fn5) + f1(tn5, fn5, fp5));
  out.balanced_accuracy = 0.5 * (static_cast<double>(tp5) / p + static_cast<double>(tn5) / q);
  return out;
}

}  // namespace citegraph
