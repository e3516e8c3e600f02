#include "citegraph/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace citegraph {

std::size_t ParamRefs::total() const {
  std::size_t n = 0;
  for (const auto& s : spans_) n += s.size();
  return n;
}

std::vector<double> ParamRefs::to_flat() const {
  std::vector<double> out;
  out.reserve(total());
  for (const auto& s : spans_) out.insert(out.end(), s.begin(), s.end());
  return out;
}

void ParamRefs::from_flat(std::span<const double> flat) {
  std::size_t off = 0;
  for (auto& s : spans_) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = flat[off + i];
    off += s.size();
  }
  if (off != flat.size()) throw std::invalid_argument("ParamRefs::from_flat: size mismatch");
}

void ParamRefs::zero() {
  for (auto& s : spans_) {
    for (double& x : s) x = 0.0;
  }
}

void Adam::step(ParamRefs& params, const ParamRefs& grads) {
  const std::size_t n = params.total();
  if (grads.total() != n) throw std::invalid_argument("Adam::step: parameter/gradient size mismatch");
  if (m_.empty()) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));

  std::size_t off = 0;
  const auto& pspans = params.spans();
  const auto& gspans = grads.spans();
  for (std::size_t s = 0; s < pspans.size(); ++s) {
    auto p = pspans[s];
    auto g = gspans[s];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::size_t k = off + i;
      m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * g[i];
      v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double m_hat = m_[k] / bc1;
      const double v_hat = v_[k] / bc2;
      p[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
    off += p.size();
  }
}

}  // namespace citegraph
