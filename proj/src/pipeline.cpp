#include "citegraph/pipeline.hpp"

#include "citegraph/error.hpp"

namespace citegraph {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::DeepWalk: return "deepwalk";
    case MethodKind::FeaturesOnly: return "features_only";
    case MethodKind::GraphSageMean: return "graphsage_mean";
    case MethodKind::GraphSageLstm: return "graphsage_lstm";
    case MethodKind::CombSage: return "combsage";
  }
  return "?";
}

MethodKind method_from_string(const std::string& name) {
  for (const MethodKind k : kAllMethods) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown method '" + name +
                    "' (expected deepwalk|features_only|graphsage_mean|graphsage_lstm|combsage)");
}

bool is_gnn(MethodKind kind) {
  return kind == MethodKind::GraphSageMean || kind == MethodKind::GraphSageLstm ||
         kind == MethodKind::CombSage;
}

GnnArch GnnHyper::arch_for(MethodKind kind, std::size_t input_dim) const {
  GnnArch arch;
  arch.input_dim = input_dim;
  arch.hidden_dims = hidden_dims;
  arch.fanouts = fanouts;
  switch (kind) {
    case MethodKind::CombSage:
      arch.kind = GnnKind::CombSage;
      arch.agg_c = comb_agg_c;
      arch.agg_i = comb_agg_i;
      arch.jumping_knowledge = jumping_knowledge.value_or(true);
      break;
    case MethodKind::GraphSageMean:
      arch.kind = GnnKind::GraphSage;
      arch.agg = AggKind::Mean;
      arch.jumping_knowledge = jumping_knowledge.value_or(false);
      break;
    case MethodKind::GraphSageLstm:
      arch.kind = GnnKind::GraphSage;
      arch.agg = AggKind::Lstm;
      arch.jumping_knowledge = jumping_knowledge.value_or(false);
      break;
    default: throw ConfigError("arch_for: " + citegraph::to_string(kind) + " is not a GNN method");
  }
  return arch;
}

MethodArtifacts train_method(MethodKind kind, const Graph& g, const Matrix& features,
                             const GnnHyper& hyper, const WalkConfig& walk_cfg,
                             std::uint64_t master_seed, std::size_t repeat_index) {
  MethodArtifacts out;
  const std::string name = to_string(kind);
  switch (kind) {
    case MethodKind::FeaturesOnly: {
      out.embeddings = embed_features_only(features);
      return out;
    }
    case MethodKind::DeepWalk: {
      WalkConfig cfg = walk_cfg;
      cfg.seed = derive_seed(master_seed, "method/" + name, repeat_index);
      out.embeddings = deepwalk_embed(g, cfg);
      return out;
    }
    default: {
      const GnnArch arch = hyper.arch_for(kind, features.cols());
      TrainConfig cfg;
      cfg.epochs = hyper.epochs;
      cfg.batch_size = hyper.batch_size;
      cfg.negatives_per_positive = hyper.negatives_per_positive;
      cfg.learning_rate = hyper.learning_rate;
      cfg.seed = derive_seed(master_seed, "method/" + name, repeat_index);
      TrainResult trained = train_unsupervised(g, features, arch, cfg);
      Rng embed_rng(derive_seed(master_seed, "embed/" + name, repeat_index));
      out.embeddings = model_forward(g, features, trained.model, embed_rng, ForwardMode::Inference);
      if (!out.embeddings.all_finite()) {
        throw NumericError("train_method: non-finite embeddings from " + name);
      }
      out.model = std::move(trained.model);
      out.loss_trace = std::move(trained.epoch_mean_loss);
      return out;
    }
  }
}

std::vector<MethodReport> run_evaluation(const Graph& g, const Matrix& features,
                                         const std::vector<MethodKind>& methods,
                                         const GnnHyper& hyper, const EvalSettings& settings,
                                         std::uint64_t master_seed) {
  if (settings.repeats == 0) throw ConfigError("run_evaluation: repeats must be >= 1");

  std::vector<MethodReport> reports(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) reports[m].kind = methods[m];

  for (std::size_t rep = 0; rep < settings.repeats; ++rep) {
    const auto split_result =
        split_edges(g, settings.test_frac, settings.val_frac, derive_seed(master_seed, "split", rep));
    const EdgeSplit& split = split_result.split;
    const Graph& train_graph = split_result.train_graph;

    // Network distance: DeepWalk on the train graph (test edges must not
    // leak into the distances). Reused as the deepwalk method's embeddings.
    WalkConfig dw_cfg = settings.deepwalk;
    dw_cfg.seed = derive_seed(master_seed, "method/deepwalk", rep);
    const Matrix network_emb = deepwalk_embed(train_graph, dw_cfg);

    std::vector<Edge> test_edges = split.test_pos;
    test_edges.insert(test_edges.end(), split.test_neg.begin(), split.test_neg.end());
    const QuadrantAssignment quadrants =
        assign_quadrants(test_edges, network_emb, features, settings.thresholds);

    for (std::size_t m = 0; m < methods.size(); ++m) {
      Matrix embeddings;
      if (methods[m] == MethodKind::DeepWalk) {
        embeddings = network_emb;
      } else {
        MethodArtifacts art =
            train_method(methods[m], train_graph, features, hyper, settings.deepwalk, master_seed, rep);
        embeddings = std::move(art.embeddings);
        if (!art.loss_trace.empty()) reports[m].loss_traces.push_back(std::move(art.loss_trace));
      }
      MlpConfig mlp_cfg = settings.mlp;
      mlp_cfg.seed = derive_seed(master_seed, "mlp/" + to_string(methods[m]), rep);
      reports[m].repeats.push_back(evaluate_split(embeddings, split, quadrants, mlp_cfg));
    }
  }
  return reports;
}

MethodReport evaluate_method(const Graph& g, const Matrix& features, MethodKind method,
                             const GnnHyper& hyper, const EvalSettings& settings,
                             std::uint64_t master_seed) {
  return run_evaluation(g, features, {method}, hyper, settings, master_seed)[0];
}

}  // namespace citegraph
