#pragma once

#include <span>
#include <vector>

#include "propaxis/num/matrix.hpp"

namespace propaxis::num {

/// Adam with bias correction. Moment accumulators are created on the first
/// update and must keep matching the parameter shapes afterwards.
struct AdamState {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    std::size_t step = 0;
    std::vector<Matrix> m;
    std::vector<Matrix> v;

    explicit AdamState(double learning_rate = 0.001) : lr(learning_rate) {}

    void update(std::span<Matrix* const> params, std::span<const Matrix* const> grads);
};

} // namespace propaxis::num
