#include "propaxis/num/grad_check.hpp"

#include <cmath>

namespace propaxis::num {

double grad_check(const LossFn& loss_fn, std::vector<Matrix> params, double h) {
    if (!(h > 0.0 && h <= 1e-2))
        raise(ErrorKind::Domain, "grad_check: h must be in (0, 1e-2]");

    std::vector<Matrix> analytic;
    const double base = loss_fn(params, &analytic);
    if (!std::isfinite(base)) raise(ErrorKind::Numeric, "grad_check: loss non-finite at base point");
    if (analytic.size() != params.size())
        raise(ErrorKind::Shape, "grad_check: loss_fn returned wrong gradient count");

    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        require_same_shape(params[p], analytic[p], "grad_check");
        for (std::size_t i = 0; i < params[p].data.size(); ++i) {
            const double saved = params[p].data[i];
            params[p].data[i] = saved + h;
            const double up = loss_fn(params, nullptr);
            params[p].data[i] = saved - h;
            const double down = loss_fn(params, nullptr);
            params[p].data[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                raise(ErrorKind::Numeric, "grad_check: loss non-finite at param " +
                                              std::to_string(p) + " coordinate " +
                                              std::to_string(i));
            const double fd = (up - down) / (2.0 * h);
            const double an = analytic[p].data[i];
            const double rel = std::fabs(an - fd) / (std::fabs(an) + std::fabs(fd) + 1e-12);
            if (rel > worst) worst = rel;
        }
    }
    return worst;
}

} // namespace propaxis::num
