#pragma once

#include <functional>
#include <span>

namespace citegraph {

// Max over coordinates of |analytic - central_difference| /
// max(1e-8, |analytic| + |numeric|). `loss` is re-evaluated with each
// coordinate of `params` perturbed by +-epsilon; params are restored
// afterwards. epsilon > 0.
double finite_difference_check(const std::function<double()>& loss, std::span<double> params,
                               std::span<const double> analytic_grad, double epsilon);

}  // namespace citegraph
