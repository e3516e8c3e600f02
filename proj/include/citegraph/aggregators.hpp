#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "citegraph/lstm.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

enum class AggKind { Mean, MaxPool, Lstm };

std::string to_string(AggKind kind);
AggKind agg_kind_from_string(const std::string& name);

// A neighbor-message aggregator with learnable parameters where applicable.
//   Mean:    elementwise mean, output dim = input dim. Exactly permutation
//            invariant (order-independent multiset summation).
//   MaxPool: elementwise max over relu(W*m + b) per message, output dim =
//            pool rows. Exactly permutation invariant.
//   Lstm:    lstm_forward over the messages; order is the caller's (sorted
//            by node id at inference, seeded shuffle during training).
struct AggParams {
  AggKind kind = AggKind::Mean;
  std::size_t input_dim = 0;
  // MaxPool
  Matrix pool_weight;  // pool_dim x input_dim
  Vector pool_bias;    // pool_dim
  // Lstm
  LstmParams lstm;

  std::size_t output_dim() const;

  static AggParams mean(std::size_t input_dim);
  static AggParams max_pool(std::size_t input_dim, std::size_t pool_dim, Rng& rng);
  static AggParams max_pool_zeros(std::size_t input_dim, std::size_t pool_dim);
  static AggParams lstm_agg(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);
  static AggParams lstm_agg_zeros(std::size_t input_dim, std::size_t hidden_dim);
  static AggParams make(AggKind kind, std::size_t input_dim, std::size_t output_dim, Rng& rng);
  static AggParams make_zeros(AggKind kind, std::size_t input_dim, std::size_t output_dim);
};

// Forward cache for the backward pass.
struct AggState {
  std::size_t message_count = 0;
  // MaxPool: per-message pre-activation projections and per-coordinate argmax.
  std::vector<Vector> pool_pre;
  std::vector<std::size_t> argmax;
  // Lstm: processing order (indices into the message list) and cell caches.
  std::vector<std::size_t> order;
  LstmState lstm;
  // Messages as seen by the forward pass (needed for parameter gradients).
  std::vector<Vector> messages;
};

// Aggregates a non-empty list of equal-dimension messages. `order_rng`, used
// only by the Lstm kind, shuffles the processing order; pass nullptr for the
// deterministic sorted-input order (inference). Throws std::invalid_argument
// on an empty list or dimension mismatch.
Vector aggregate(const AggParams& params, const std::vector<Vector>& messages, Rng* order_rng,
                 AggState& state);

// Accumulates parameter gradients into `grads` and per-message gradients into
// `d_messages` (pre-sized to match `messages`).
void aggregate_backward(const AggParams& params, const AggState& state, const Vector& d_out,
                        AggParams& grads, std::vector<Vector>& d_messages);

}  // namespace citegraph
