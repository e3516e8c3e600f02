#pragma once

#include <cstddef>
#include <vector>

#include "citegraph/matrix.hpp"

namespace citegraph {

// Single-layer LSTM. Each gate weight maps the concatenated [x_t; h_{t-1}]
// to the hidden dimension; hidden and cell state start at zero and the final
// hidden state is the output.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix w_input, w_forget, w_output, w_candidate;  // hidden x (input+hidden)
  Vector b_input, b_forget, b_output, b_candidate;  // hidden

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);
  static LstmParams glorot(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);
};

// Per-step activations cached by the forward pass for BPTT.
struct LstmState {
  struct Step {
    Vector joined;  // [x_t; h_{t-1}]
    Vector gate_in, gate_forget, gate_out, candidate;
    Vector cell, cell_tanh, cell_prev;
  };
  std::vector<Step> steps;
  Vector hidden;  // h_T
};

// Runs the recurrence over `sequence` (each element of input_dim). Throws
// std::invalid_argument on an empty sequence or a dimension mismatch.
Vector lstm_forward(const LstmParams& params, const std::vector<Vector>& sequence, LstmState& state);

// Backpropagates d_hidden (gradient w.r.t. h_T) through the cached state.
// Parameter gradients accumulate into `grads`; per-step input gradients
// accumulate into d_sequence (must be pre-sized like the forward inputs).
void lstm_backward(const LstmParams& params, const LstmState& state, const Vector& d_hidden,
                   LstmParams& grads, std::vector<Vector>& d_sequence);

}  // namespace citegraph
