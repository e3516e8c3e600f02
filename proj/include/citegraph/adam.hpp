#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "citegraph/matrix.hpp"

namespace citegraph {

// Ordered list of views into parameter (or gradient) storage. Registration
// order defines the flattened coordinate layout, so a model and its gradient
// twin must register tensors in the same order.
class ParamRefs {
 public:
  void add(Matrix& m) { spans_.emplace_back(m.data().data(), m.data().size()); }
  void add(Vector& v) { spans_.emplace_back(v.data(), v.size()); }
  void add(double& x) { spans_.emplace_back(&x, 1); }

  std::size_t total() const;
  const std::vector<std::span<double>>& spans() const { return spans_; }

  std::vector<double> to_flat() const;
  void from_flat(std::span<const double> flat);
  void zero();

 private:
  std::vector<std::span<double>> spans_;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction over a fixed parameter layout. Moment buffers
// are allocated on first step and mirror the flattened parameter shape.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  std::uint64_t step_count() const { return step_; }
  const AdamConfig& config() const { return cfg_; }

  // params and grads must present identical layouts (same span sizes in the
  // same order) on every call.
  void step(ParamRefs& params, const ParamRefs& grads);

 private:
  AdamConfig cfg_;
  std::uint64_t step_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace citegraph
