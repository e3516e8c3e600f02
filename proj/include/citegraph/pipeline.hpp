#pragma once

#include <optional>
#include <string>
#include <vector>

#include "citegraph/deepwalk.hpp"
#include "citegraph/evaluate.hpp"
#include "citegraph/trainer.hpp"

namespace citegraph {

enum class MethodKind { DeepWalk, FeaturesOnly, GraphSageMean, GraphSageLstm, CombSage };

inline constexpr MethodKind kAllMethods[] = {MethodKind::DeepWalk, MethodKind::FeaturesOnly,
                                             MethodKind::GraphSageMean, MethodKind::GraphSageLstm,
                                             MethodKind::CombSage};

std::string to_string(MethodKind kind);
MethodKind method_from_string(const std::string& name);
bool is_gnn(MethodKind kind);

// Hyperparameters shared by every GNN method (the grid-searched values are
// tuned once and reused across architectures).
struct GnnHyper {
  std::vector<std::size_t> hidden_dims = {128, 128};
  std::vector<std::size_t> fanouts = {25, 10};
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  std::size_t negatives_per_positive = 1;
  double learning_rate = 1e-3;
  AggKind comb_agg_c = AggKind::MaxPool;
  AggKind comb_agg_i = AggKind::Lstm;
  // Default: on for combsage, off for the graphsage baselines.
  std::optional<bool> jumping_knowledge;

  GnnArch arch_for(MethodKind kind, std::size_t input_dim) const;
};

struct EvalSettings {
  double test_frac = 0.20;
  double val_frac = 0.05;
  std::size_t repeats = 5;
  std::optional<std::pair<double, double>> thresholds;  // network, topic
  MlpConfig mlp;
  WalkConfig deepwalk;  // the DeepWalk baseline; also defines network distance
};

// Embeddings (plus model/loss trace where applicable) of one method trained
// on `g`. Seeds derive from (master_seed, method name, repeat_index).
struct MethodArtifacts {
  Matrix embeddings;
  std::optional<GnnModel> model;
  std::vector<double> loss_trace;
};

MethodArtifacts train_method(MethodKind kind, const Graph& g, const Matrix& features,
                             const GnnHyper& hyper, const WalkConfig& walk_cfg,
                             std::uint64_t master_seed, std::size_t repeat_index);

struct MethodReport {
  MethodKind kind = MethodKind::FeaturesOnly;
  std::vector<RepeatMetrics> repeats;
  std::vector<std::vector<double>> loss_traces;  // per repeat; empty for non-GNN methods
};

// The full protocol: per repeat, a fresh uniform edge split, embeddings
// retrained on the train graph only, network distances from DeepWalk on that
// same train graph, topic distances from the input features, one classifier
// per method. Test edges never reach embedding or classifier training.
std::vector<MethodReport> run_evaluation(const Graph& g, const Matrix& features,
                                         const std::vector<MethodKind>& methods,
                                         const GnnHyper& hyper, const EvalSettings& settings,
                                         std::uint64_t master_seed);

// Single-method convenience wrapper around run_evaluation.
MethodReport evaluate_method(const Graph& g, const Matrix& features, MethodKind method,
                             const GnnHyper& hyper, const EvalSettings& settings,
                             std::uint64_t master_seed);

}  // namespace citegraph
