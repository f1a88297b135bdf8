#pragma once

#include <functional>
#include <span>
#include <vector>

#include "propaxis/num/matrix.hpp"

namespace propaxis::num {

/// A differentiable loss: returns the scalar loss for `params`; when
/// `grads_out` is non-null it must also fill one gradient per parameter.
using LossFn = std::function<double(std::span<const Matrix> params, std::vector<Matrix>* grads_out)>;

/// Compares the analytic gradient against central finite differences with
/// step h, one coordinate at a time. Returns
///   max over coordinates of |analytic - fd| / (|analytic| + |fd| + 1e-12).
/// h must lie in (0, 1e-2]. A non-finite loss raises an error naming the
/// parameter and coordinate being perturbed.
double grad_check(const LossFn& loss_fn, std::vector<Matrix> params, double h);

} // namespace propaxis::num
