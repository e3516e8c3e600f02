#include "citegraph/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace citegraph {

double finite_difference_check(const std::function<double()>& loss, std::span<double> params,
                               std::span<const double> analytic_grad, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("finite_difference_check: epsilon must be > 0");
  if (params.size() != analytic_grad.size()) {
    throw std::invalid_argument("finite_difference_check: gradient size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + epsilon;
    const double up = loss();
    params[i] = saved - epsilon;
    const double down = loss();
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double err = std::abs(analytic_grad[i] - numeric) /
                       std::max(1e-8, std::abs(analytic_grad[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace citegraph
