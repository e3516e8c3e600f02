#include "citegraph/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace citegraph {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  const std::size_t joined = input_dim + hidden_dim;
  p.w_input = Matrix(hidden_dim, joined);
  p.w_forget = Matrix(hidden_dim, joined);
  p.w_output = Matrix(hidden_dim, joined);
  p.w_candidate = Matrix(hidden_dim, joined);
  p.b_input.assign(hidden_dim, 0.0);
  p.b_forget.assign(hidden_dim, 0.0);
  p.b_output.assign(hidden_dim, 0.0);
  p.b_candidate.assign(hidden_dim, 0.0);
  return p;
}

LstmParams LstmParams::glorot(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  LstmParams p = zeros(input_dim, hidden_dim);
  const std::size_t joined = input_dim + hidden_dim;
  glorot_init(p.w_input, joined, hidden_dim, rng);
  glorot_init(p.w_forget, joined, hidden_dim, rng);
  glorot_init(p.w_output, joined, hidden_dim, rng);
  glorot_init(p.w_candidate, joined, hidden_dim, rng);
  return p;
}

Vector lstm_forward(const LstmParams& params, const std::vector<Vector>& sequence, LstmState& state) {
  if (sequence.empty()) throw std::invalid_argument("lstm_forward: empty sequence");
  const std::size_t hid = params.hidden_dim;

  state.steps.clear();
  state.steps.reserve(sequence.size());
  Vector h(hid, 0.0);
  Vector c(hid, 0.0);

  for (const Vector& x : sequence) {
    if (x.size() != params.input_dim) {
      throw std::invalid_argument("lstm_forward: input dim " + std::to_string(x.size()) +
                                  " != " + std::to_string(params.input_dim));
    }
    LstmState::Step step;
    step.joined = concat(x, h);
    step.cell_prev = c;

    step.gate_in = matvec(params.w_input, step.joined);
    step.gate_forget = matvec(params.w_forget, step.joined);
    step.gate_out = matvec(params.w_output, step.joined);
    step.candidate = matvec(params.w_candidate, step.joined);
    for (std::size_t i = 0; i < hid; ++i) {
      step.gate_in[i] = sigmoid(step.gate_in[i] + params.b_input[i]);
      step.gate_forget[i] = sigmoid(step.gate_forget[i] + params.b_forget[i]);
      step.gate_out[i] = sigmoid(step.gate_out[i] + params.b_output[i]);
      step.candidate[i] = std::tanh(step.candidate[i] + params.b_candidate[i]);
    }

    step.cell.resize(hid);
    step.cell_tanh.resize(hid);
    for (std::size_t i = 0; i < hid; ++i) {
      step.cell[i] = step.gate_forget[i] * c[i] + step.gate_in[i] * step.candidate[i];
      step.cell_tanh[i] = std::tanh(step.cell[i]);
      h[i] = step.gate_out[i] * step.cell_tanh[i];
    }
    c = step.cell;
    state.steps.push_back(std::move(step));
  }
  state.hidden = h;
  return h;
}

void lstm_backward(const LstmParams& params, const LstmState& state, const Vector& d_hidden,
                   LstmParams& grads, std::vector<Vector>& d_sequence) {
  const std::size_t hid = params.hidden_dim;
  const std::size_t in = params.input_dim;

  Vector dh = d_hidden;
  Vector dc(hid, 0.0);
  Vector da_in(hid), da_forget(hid), da_out(hid), da_cand(hid);
  Vector d_joined(in + hid);

  for (std::size_t t = state.steps.size(); t-- > 0;) {
    const auto& s = state.steps[t];
    for (std::size_t i = 0; i < hid; ++i) {
      const double d_out_gate = dh[i] * s.cell_tanh[i];
      // dh flows into the cell through o * tanh(c).
      dc[i] += dh[i] * s.gate_out[i] * (1.0 - s.cell_tanh[i] * s.cell_tanh[i]);
      da_out[i] = d_out_gate * s.gate_out[i] * (1.0 - s.gate_out[i]);
      da_in[i] = dc[i] * s.candidate[i] * s.gate_in[i] * (1.0 - s.gate_in[i]);
      da_forget[i] = dc[i] * s.cell_prev[i] * s.gate_forget[i] * (1.0 - s.gate_forget[i]);
      da_cand[i] = dc[i] * s.gate_in[i] * (1.0 - s.candidate[i] * s.candidate[i]);
    }

    add_outer(grads.w_input, da_in, s.joined);
    add_outer(grads.w_forget, da_forget, s.joined);
    add_outer(grads.w_output, da_out, s.joined);
    add_outer(grads.w_candidate, da_cand, s.joined);
    axpy(1.0, da_in, grads.b_input);
    axpy(1.0, da_forget, grads.b_forget);
    axpy(1.0, da_out, grads.b_output);
    axpy(1.0, da_cand, grads.b_candidate);

    std::fill(d_joined.begin(), d_joined.end(), 0.0);
    matvec_transpose_add(params.w_input, da_in, d_joined);
    matvec_transpose_add(params.w_forget, da_forget, d_joined);
    matvec_transpose_add(params.w_output, da_out, d_joined);
    matvec_transpose_add(params.w_candidate, da_cand, d_joined);

    for (std::size_t i = 0; i < in; ++i) d_sequence[t][i] += d_joined[i];
    for (std::size_t i = 0; i < hid; ++i) {
      dh[i] = d_joined[in + i];
      dc[i] *= s.gate_forget[i];  // carry into step t-1
    }
  }
}

}  // namespace citegraph
