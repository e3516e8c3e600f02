#include "citegraph/aggregators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "citegraph/error.hpp"

namespace citegraph {

std::string to_string(AggKind kind) {
  switch (kind) {
    case AggKind::Mean: return "mean";
    case AggKind::MaxPool: return "maxpool";
    case AggKind::Lstm: return "lstm";
  }
  return "?";
}

AggKind agg_kind_from_string(const std::string& name) {
  if (name == "mean") return AggKind::Mean;
  if (name == "maxpool") return AggKind::MaxPool;
  if (name == "lstm") return AggKind::Lstm;
  throw ConfigError("unknown aggregator kind: '" + name + "' (expected mean|maxpool|lstm)");
}

std::size_t AggParams::output_dim() const {
  switch (kind) {
    case AggKind::Mean: return input_dim;
    case AggKind::MaxPool: return pool_weight.rows();
    case AggKind::Lstm: return lstm.hidden_dim;
  }
  return 0;
}

AggParams AggParams::mean(std::size_t input_dim) {
  AggParams p;
  p.kind = AggKind::Mean;
  p.input_dim = input_dim;
  return p;
}

AggParams AggParams::max_pool_zeros(std::size_t input_dim, std::size_t pool_dim) {
  AggParams p;
  p.kind = AggKind::MaxPool;
  p.input_dim = input_dim;
  p.pool_weight = Matrix(pool_dim, input_dim);
  p.pool_bias.assign(pool_dim, 0.0);
  return p;
}

AggParams AggParams::max_pool(std::size_t input_dim, std::size_t pool_dim, Rng& rng) {
  AggParams p = max_pool_zeros(input_dim, pool_dim);
  glorot_init(p.pool_weight, input_dim, pool_dim, rng);
  return p;
}

AggParams AggParams::lstm_agg_zeros(std::size_t input_dim, std::size_t hidden_dim) {
  AggParams p;
  p.kind = AggKind::Lstm;
  p.input_dim = input_dim;
  p.lstm = LstmParams::zeros(input_dim, hidden_dim);
  return p;
}

AggParams AggParams::lstm_agg(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  AggParams p;
  p.kind = AggKind::Lstm;
  p.input_dim = input_dim;
  p.lstm = LstmParams::glorot(input_dim, hidden_dim, rng);
  return p;
}

AggParams AggParams::make(AggKind kind, std::size_t input_dim, std::size_t output_dim, Rng& rng) {
  switch (kind) {
    case AggKind::Mean: return mean(input_dim);
    case AggKind::MaxPool: return max_pool(input_dim, output_dim, rng);
    case AggKind::Lstm: return lstm_agg(input_dim, output_dim, rng);
  }
  throw std::invalid_argument("AggParams::make: bad kind");
}

AggParams AggParams::make_zeros(AggKind kind, std::size_t input_dim, std::size_t output_dim) {
  switch (kind) {
    case AggKind::Mean: return mean(input_dim);
    case AggKind::MaxPool: return max_pool_zeros(input_dim, output_dim);
    case AggKind::Lstm: return lstm_agg_zeros(input_dim, output_dim);
  }
  throw std::invalid_argument("AggParams::make_zeros: bad kind");
}

Vector aggregate(const AggParams& params, const std::vector<Vector>& messages, Rng* order_rng,
                 AggState& state) {
  if (messages.empty()) throw std::invalid_argument("aggregate: empty message list");
  for (const auto& m : messages) {
    if (m.size() != params.input_dim) {
      throw std::invalid_argument("aggregate: message dim " + std::to_string(m.size()) +
                                  " != " + std::to_string(params.input_dim));
    }
  }
  state = AggState{};
  state.message_count = messages.size();
  const std::size_t n = messages.size();

  switch (params.kind) {
    case AggKind::Mean: {
      // Multiset summation keeps the result independent of message order.
      Vector out(params.input_dim);
      std::vector<double> column(n);
      for (std::size_t i = 0; i < params.input_dim; ++i) {
        for (std::size_t j = 0; j < n; ++j) column[j] = messages[j][i];
        out[i] = stable_multiset_sum(column) / static_cast<double>(n);
      }
      return out;
    }
    case AggKind::MaxPool: {
      state.messages = messages;
      const std::size_t pool_dim = params.pool_weight.rows();
      state.pool_pre.reserve(n);
      Vector out(pool_dim);
      state.argmax.assign(pool_dim, 0);
      for (std::size_t j = 0; j < n; ++j) {
        Vector pre = matvec(params.pool_weight, messages[j]);
        axpy(1.0, params.pool_bias, pre);
        for (std::size_t i = 0; i < pool_dim; ++i) {
          const double activated = pre[i] > 0.0 ? pre[i] : 0.0;
          if (j == 0 || activated > out[i]) {
            out[i] = activated;
            state.argmax[i] = j;
          }
        }
        state.pool_pre.push_back(std::move(pre));
      }
      return out;
    }
    case AggKind::Lstm: {
      state.messages = messages;
      state.order.resize(n);
      std::iota(state.order.begin(), state.order.end(), std::size_t{0});
      if (order_rng != nullptr) order_rng->shuffle(state.order);
      std::vector<Vector> sequence;
      sequence.reserve(n);
      for (const std::size_t idx : state.order) sequence.push_back(messages[idx]);
      return lstm_forward(params.lstm, sequence, state.lstm);
    }
  }
  throw std::invalid_argument("aggregate: bad kind");
}

void aggregate_backward(const AggParams& params, const AggState& state, const Vector& d_out,
                        AggParams& grads, std::vector<Vector>& d_messages) {
  const std::size_t n = state.message_count;
  switch (params.kind) {
    case AggKind::Mean: {
      const double scale = 1.0 / static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j) axpy(scale, d_out, d_messages[j]);
      return;
    }
    case AggKind::MaxPool: {
      const std::size_t pool_dim = params.pool_weight.rows();
      // Route each output coordinate to its argmax message, through the relu.
      std::vector<Vector> d_pre(n);
      for (std::size_t i = 0; i < pool_dim; ++i) {
        const std::size_t j = state.argmax[i];
        if (state.pool_pre[j][i] > 0.0) {
          if (d_pre[j].empty()) d_pre[j].assign(pool_dim, 0.0);
          d_pre[j][i] += d_out[i];
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (d_pre[j].empty()) continue;
        add_outer(grads.pool_weight, d_pre[j], state.messages[j]);
        axpy(1.0, d_pre[j], grads.pool_bias);
        matvec_transpose_add(params.pool_weight, d_pre[j], d_messages[j]);
      }
      return;
    }
    case AggKind::Lstm: {
      std::vector<Vector> d_sequence(n, Vector(params.input_dim, 0.0));
      lstm_backward(params.lstm, state.lstm, d_out, grads.lstm, d_sequence);
      for (std::size_t pos = 0; pos < n; ++pos) {
        axpy(1.0, d_sequence[pos], d_messages[state.order[pos]]);
      }
      return;
    }
  }
  throw std::invalid_argument("aggregate_backward: bad kind");
}

}  // namespace citegraph
