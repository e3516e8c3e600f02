#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citegraph/adam.hpp"
#include "citegraph/graph.hpp"
#include "citegraph/layers.hpp"

namespace citegraph {

enum class GnnKind { CombSage, GraphSage };

// Architecture template: dimensions, aggregator kinds and sampling fanouts.
// Weights are materialized by GnnModel::init.
struct GnnArch {
  GnnKind kind = GnnKind::CombSage;
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;  // output dim per layer
  AggKind agg_c = AggKind::MaxPool;      // CombSage: within components
  AggKind agg_i = AggKind::Lstm;         // CombSage: across components
  AggKind agg = AggKind::Mean;           // GraphSage
  bool jumping_knowledge = false;
  std::vector<std::size_t> fanouts;  // neighbor sample size per layer

  std::size_t num_layers() const { return hidden_dims.size(); }
};

struct GnnModel {
  GnnArch arch;
  std::vector<CombLayerParams> comb_layers;
  std::vector<SageLayerParams> sage_layers;

  static GnnModel init(const GnnArch& arch, std::uint64_t seed);
  static GnnModel zeros_like(const GnnModel& other);

  // Embedding width: sum of all layer output dims under jumping knowledge,
  // else the final layer's output dim.
  std::size_t embed_dim() const;

  // Registers every parameter tensor in a fixed order (layer by layer).
  void collect_params(ParamRefs& refs);
};

void collect_params(CombLayerParams& layer, ParamRefs& refs);
void collect_params(SageLayerParams& layer, ParamRefs& refs);
void collect_params(AggParams& agg, ParamRefs& refs);
void collect_params(LstmParams& lstm, ParamRefs& refs);

enum class ForwardMode {
  Train,      // LSTM aggregators see a seeded random message order
  Inference,  // LSTM aggregators see messages sorted by node id
};

// Full-graph forward pass: row v of the result is z_v. Layer k samples
// min(fanout_k, deg) neighbors per node from `rng`; when every fanout covers
// the maximum degree no randomness is consumed.
Matrix model_forward(const Graph& g, const Matrix& features, const GnnModel& model, Rng& rng,
                     ForwardMode mode);

// Identity embedding of precomputed content features (the text-only path).
Matrix embed_features_only(const Matrix& features);

// Round-trips are bit-exact (doubles serialize with shortest-round-trip
// decimals). Throws ConfigError on unreadable or mismatched files.
void save_gnn_checkpoint(const std::string& path, const GnnModel& model, std::uint64_t seed);
GnnModel load_gnn_checkpoint(const std::string& path, std::uint64_t* seed_out = nullptr);

std::string to_string(GnnKind kind);

}  // namespace citegraph
