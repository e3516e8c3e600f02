#pragma once

#include <cstddef>
#include <vector>

#include "citegraph/aggregators.hpp"
#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

// One layer of the component-based architecture. Messages from each connected
// component of the sampled neighborhood are pooled by agg_c, passed through
// the inner transform, pooled across components by agg_i and combined with
// the node's own state:
//
//   for c in C(v):  t_c = relu(W_inner * [h_v ; agg_c({h_u : u in c})] + b_inner)
//   h_v' = normalize(relu(W_combine * [h_v ; agg_i({t_c})] + b_combine))
//
// An isolated node skips aggregation and combines with a zero message.
struct CombLayerParams {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Matrix w_inner;    // out_dim x (in_dim + agg_c.output_dim())
  Vector b_inner;    // out_dim
  Matrix w_combine;  // out_dim x (in_dim + agg_i.output_dim())
  Vector b_combine;  // out_dim
  AggParams agg_c;   // within-component
  AggParams agg_i;   // across components

  static CombLayerParams create(std::size_t in_dim, std::size_t out_dim, AggKind agg_c_kind,
                                AggKind agg_i_kind, Rng& rng);
  static CombLayerParams zeros_like(const CombLayerParams& other);
};

struct CombLayerState {
  NodeId v = 0;
  std::vector<NodeId> sampled;  // sorted
  NeighborComponents comps;
  std::vector<AggState> agg_c_states;
  std::vector<Vector> comp_message;  // agg_c output per component
  std::vector<Vector> inner_pre;     // pre-relu inner transform per component
  std::vector<Vector> inner_out;     // t_c
  AggState agg_i_state;
  Vector agg_i_out;
  Vector combine_pre;   // pre-relu
  Vector combine_post;  // relu output, before normalization
  Vector output;
  double output_norm = 0.0;  // norm of combine_post (0 marks the zero bypass)

  std::size_t component_count() const { return comps.components.size(); }
  std::size_t inner_transform_count() const { return inner_out.size(); }
};

// h_prev holds layer k-1 states for every node id referenced (row = node).
// `sampled` must be a subset of N(v) (sorted ascending). `order_rng` feeds
// LSTM aggregator shuffling; nullptr selects the deterministic sorted order.
Vector combsage_layer_forward(const Graph& g, const Matrix& h_prev, const CombLayerParams& params,
                              NodeId v, const std::vector<NodeId>& sampled, Rng* order_rng,
                              CombLayerState& state);

// Accumulates parameter gradients into `grads`; gradients w.r.t. h_prev rows
// (node v and each sampled neighbor) accumulate into d_h_prev when non-null.
void combsage_layer_backward(const CombLayerParams& params, const CombLayerState& state,
                             const Matrix& h_prev, const Vector& d_out, CombLayerParams& grads,
                             Matrix* d_h_prev);

// Plain GraphSAGE layer: h_v' = normalize(relu(W * [h_v ; agg({h_u})] + b)).
struct SageLayerParams {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Matrix weight;  // out_dim x (in_dim + agg.output_dim())
  Vector bias;    // out_dim
  AggParams agg;

  static SageLayerParams create(std::size_t in_dim, std::size_t out_dim, AggKind agg_kind, Rng& rng);
  static SageLayerParams zeros_like(const SageLayerParams& other);
};

struct SageLayerState {
  NodeId v = 0;
  std::vector<NodeId> sampled;
  AggState agg_state;
  Vector agg_out;
  Vector pre;   // pre-relu
  Vector post;  // relu output, before normalization
  Vector output;
  double output_norm = 0.0;
};

Vector graphsage_layer_forward(const Matrix& h_prev, const SageLayerParams& params, NodeId v,
                               const std::vector<NodeId>& sampled, Rng* order_rng,
                               SageLayerState& state);

void graphsage_layer_backward(const SageLayerParams& params, const SageLayerState& state,
                              const Matrix& h_prev, const Vector& d_out, SageLayerParams& grads,
                              Matrix* d_h_prev);

}  // namespace citegraph
