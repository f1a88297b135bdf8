#include "propaxis/num/adam.hpp"

#include <cmath>

namespace propaxis::num {

void AdamState::update(std::span<Matrix* const> params, std::span<const Matrix* const> grads) {
    if (params.size() != grads.size())
        raise(ErrorKind::Shape, "adam: parameter/gradient count mismatch");
    if (m.empty()) {
        for (const Matrix* p : params) {
            m.emplace_back(p->rows, p->cols);
            v.emplace_back(p->rows, p->cols);
        }
    }
    if (m.size() != params.size())
        raise(ErrorKind::Shape, "adam: state was initialized for a different parameter set");

    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& param = *params[p];
        const Matrix& grad = *grads[p];
        require_same_shape(param, grad, "adam");
        require_same_shape(param, m[p], "adam moment");
        for (std::size_t i = 0; i < param.data.size(); ++i) {
            const double g = grad.data[i];
            m[p].data[i] = beta1 * m[p].data[i] + (1.0 - beta1) * g;
            v[p].data[i] = beta2 * v[p].data[i] + (1.0 - beta2) * g * g;
            const double mhat = m[p].data[i] / bc1;
            const double vhat = v[p].data[i] / bc2;
            param.data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

} // namespace propaxis::num
