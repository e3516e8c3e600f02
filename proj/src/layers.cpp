#include "citegraph/layers.hpp"

#include <stdexcept>

namespace citegraph {

CombLayerParams CombLayerParams::create(std::size_t in_dim, std::size_t out_dim, AggKind agg_c_kind,
                                        AggKind agg_i_kind, Rng& rng) {
  CombLayerParams p;
  p.in_dim = in_dim;
  p.out_dim = out_dim;
  // Within-component aggregation sees layer-(k-1) states; the across-component
  // aggregation sees inner-transform outputs of dim out_dim.
  p.agg_c = AggParams::make(agg_c_kind, in_dim, out_dim, rng);
  p.agg_i = AggParams::make(agg_i_kind, out_dim, out_dim, rng);
  const std::size_t inner_in = in_dim + p.agg_c.output_dim();
  const std::size_t combine_in = in_dim + p.agg_i.output_dim();
  p.w_inner = Matrix(out_dim, inner_in);
  p.b_inner.assign(out_dim, 0.0);
  p.w_combine = Matrix(out_dim, combine_in);
  p.b_combine.assign(out_dim, 0.0);
  glorot_init(p.w_inner, inner_in, out_dim, rng);
  glorot_init(p.w_combine, combine_in, out_dim, rng);
  return p;
}

CombLayerParams CombLayerParams::zeros_like(const CombLayerParams& other) {
  CombLayerParams p;
  p.in_dim = other.in_dim;
  p.out_dim = other.out_dim;
  p.agg_c = AggParams::make_zeros(other.agg_c.kind, other.agg_c.input_dim, other.agg_c.output_dim());
  p.agg_i = AggParams::make_zeros(other.agg_i.kind, other.agg_i.input_dim, other.agg_i.output_dim());
  p.w_inner = Matrix(other.w_inner.rows(), other.w_inner.cols());
  p.b_inner.assign(other.b_inner.size(), 0.0);
  p.w_combine = Matrix(other.w_combine.rows(), other.w_combine.cols());
  p.b_combine.assign(other.b_combine.size(), 0.0);
  return p;
}

Vector combsage_layer_forward(const Graph& g, const Matrix& h_prev, const CombLayerParams& params,
                              NodeId v, const std::vector<NodeId>& sampled, Rng* order_rng,
                              CombLayerState& state) {
  state = CombLayerState{};
  state.v = v;
  state.sampled = sampled;
  const auto h_v = h_prev.row(v);

  Vector message;
  if (sampled.empty()) {
    message.assign(params.agg_i.output_dim(), 0.0);
  } else {
    state.comps = neighborhood_components(g, v, sampled);
    const std::size_t n_comps = state.comps.components.size();
    state.agg_c_states.resize(n_comps);
    state.comp_message.reserve(n_comps);
    state.inner_pre.reserve(n_comps);
    state.inner_out.reserve(n_comps);

    std::vector<Vector> inner_outputs;
    inner_outputs.reserve(n_comps);
    for (std::size_t ci = 0; ci < n_comps; ++ci) {
      std::vector<Vector> msgs;
      msgs.reserve(state.comps.components[ci].size());
      for (const NodeId u : state.comps.components[ci]) msgs.push_back(h_prev.row_copy(u));
      Vector m_c = aggregate(params.agg_c, msgs, order_rng, state.agg_c_states[ci]);

      Vector pre = matvec(params.w_inner, concat(h_v, m_c));
      axpy(1.0, params.b_inner, pre);
      Vector t_c = relu(pre);

      state.comp_message.push_back(std::move(m_c));
      state.inner_pre.push_back(std::move(pre));
      inner_outputs.push_back(t_c);
      state.inner_out.push_back(std::move(t_c));
    }
    message = aggregate(params.agg_i, inner_outputs, order_rng, state.agg_i_state);
  }
  state.agg_i_out = message;

  state.combine_pre = matvec(params.w_combine, concat(h_v, message));
  axpy(1.0, params.b_combine, state.combine_pre);
  state.combine_post = relu(state.combine_pre);
  state.output = l2_normalize(state.combine_post, &state.output_norm);
  return state.output;
}

void combsage_layer_backward(const CombLayerParams& params, const CombLayerState& state,
                             const Matrix& h_prev, const Vector& d_out, CombLayerParams& grads,
                             Matrix* d_h_prev) {
  const auto h_v = h_prev.row(state.v);
  const std::size_t in_dim = params.in_dim;

  const Vector d_post = l2_normalize_backward(state.output, state.output_norm, d_out);
  Vector d_combine_pre(d_post.size());
  relu_backward(state.combine_pre, d_post, d_combine_pre);

  const Vector combine_in = concat(h_v, state.agg_i_out);
  add_outer(grads.w_combine, d_combine_pre, combine_in);
  axpy(1.0, d_combine_pre, grads.b_combine);
  Vector d_combine_in(combine_in.size(), 0.0);
  matvec_transpose_add(params.w_combine, d_combine_pre, d_combine_in);

  Vector d_hv(in_dim, 0.0);
  for (std::size_t i = 0; i < in_dim; ++i) d_hv[i] += d_combine_in[i];

  if (!state.sampled.empty()) {
    const Vector d_agg_i(d_combine_in.begin() + static_cast<std::ptrdiff_t>(in_dim),
                         d_combine_in.end());
    const std::size_t n_comps = state.comps.components.size();
    std::vector<Vector> d_inner_out(n_comps, Vector(params.out_dim, 0.0));
    aggregate_backward(params.agg_i, state.agg_i_state, d_agg_i, grads.agg_i, d_inner_out);

    for (std::size_t ci = 0; ci < n_comps; ++ci) {
      Vector d_inner_pre(params.out_dim);
      relu_backward(state.inner_pre[ci], d_inner_out[ci], d_inner_pre);

      const Vector inner_in = concat(h_v, state.comp_message[ci]);
      add_outer(grads.w_inner, d_inner_pre, inner_in);
      axpy(1.0, d_inner_pre, grads.b_inner);
      Vector d_inner_in(inner_in.size(), 0.0);
      matvec_transpose_add(params.w_inner, d_inner_pre, d_inner_in);

      for (std::size_t i = 0; i < in_dim; ++i) d_hv[i] += d_inner_in[i];
      const Vector d_m_c(d_inner_in.begin() + static_cast<std::ptrdiff_t>(in_dim), d_inner_in.end());

      const auto& members = state.comps.components[ci];
      std::vector<Vector> d_msgs(members.size(), Vector(in_dim, 0.0));
      aggregate_backward(params.agg_c, state.agg_c_states[ci], d_m_c, grads.agg_c, d_msgs);
      if (d_h_prev != nullptr) {
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
          axpy(1.0, d_msgs[mi], d_h_prev->row(members[mi]));
        }
      }
    }
  }

  if (d_h_prev != nullptr) axpy(1.0, d_hv, d_h_prev->row(state.v));
}

SageLayerParams SageLayerParams::create(std::size_t in_dim, std::size_t out_dim, AggKind agg_kind,
                                        Rng& rng) {
  SageLayerParams p;
  p.in_dim = in_dim;
  p.out_dim = out_dim;
  p.agg = AggParams::make(agg_kind, in_dim, out_dim, rng);
  const std::size_t joined = in_dim + p.agg.output_dim();
  p.weight = Matrix(out_dim, joined);
  p.bias.assign(out_dim, 0.0);
  glorot_init(p.weight, joined, out_dim, rng);
  return p;
}

SageLayerParams SageLayerParams::zeros_like(const SageLayerParams& other) {
  SageLayerParams p;
  p.in_dim = other.in_dim;
  p.out_dim = other.out_dim;
  p.agg = AggParams::make_zeros(other.agg.kind, other.agg.input_dim, other.agg.output_dim());
  p.weight = Matrix(other.weight.rows(), other.weight.cols());
  p.bias.assign(other.bias.size(), 0.0);
  return p;
}

Vector graphsage_layer_forward(const Matrix& h_prev, const SageLayerParams& params, NodeId v,
                               const std::vector<NodeId>& sampled, Rng* order_rng,
                               SageLayerState& state) {
  state = SageLayerState{};
  state.v = v;
  state.sampled = sampled;

  if (sampled.empty()) {
    state.agg_out.assign(params.agg.output_dim(), 0.0);
  } else {
    std::vector<Vector> msgs;
    msgs.reserve(sampled.size());
    for (const NodeId u : sampled) msgs.push_back(h_prev.row_copy(u));
    state.agg_out = aggregate(params.agg, msgs, order_rng, state.agg_state);
  }

  state.pre = matvec(params.weight, concat(h_prev.row(v), state.agg_out));
  axpy(1.0, params.bias, state.pre);
  state.post = relu(state.pre);
  state.output = l2_normalize(state.post, &state.output_norm);
  return state.output;
}

void graphsage_layer_backward(const SageLayerParams& params, const SageLayerState& state,
                              const Matrix& h_prev, const Vector& d_out, SageLayerParams& grads,
                              Matrix* d_h_prev) {
  const std::size_t in_dim = params.in_dim;

  const Vector d_post = l2_normalize_backward(state.output, state.output_norm, d_out);
  Vector d_pre(d_post.size());
  relu_backward(state.pre, d_post, d_pre);

  const Vector joined = concat(h_prev.row(state.v), state.agg_out);
  add_outer(grads.weight, d_pre, joined);
  axpy(1.0, d_pre, grads.bias);
  Vector d_joined(joined.size(), 0.0);
  matvec_transpose_add(params.weight, d_pre, d_joined);

  if (d_h_prev != nullptr) {
    for (std::size_t i = 0; i < in_dim; ++i) d_h_prev->row(state.v)[i] += d_joined[i];
  }

  if (!state.sampled.empty()) {
    const Vector d_agg(d_joined.begin() + static_cast<std::ptrdiff_t>(in_dim), d_joined.end());
    std::vector<Vector> d_msgs(state.sampled.size(), Vector(in_dim, 0.0));
    aggregate_backward(params.agg, state.agg_state, d_agg, grads.agg, d_msgs);
    if (d_h_prev != nullptr) {
      for (std::size_t mi = 0; mi < state.sampled.size(); ++mi) {
        axpy(1.0, d_msgs[mi], d_h_prev->row(state.sampled[mi]));
      }
    }
  }
}

}  // namespace citegraph
