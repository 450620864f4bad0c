#include "aoa/gradcheck.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoa {

std::vector<Real> finite_difference_gradient(
    const std::function<Real(const std::vector<Real>&)>& loss_fn,
    std::vector<Real> params, Real epsilon) {
    if (!(epsilon > 0)) {
        throw std::invalid_argument("finite_difference_gradient: epsilon must be > 0");
    }
    std::vector<Real> grad(params.size(), Real(0));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Real saved = params[i];
        params[i] = saved + epsilon;
        const Real hi = loss_fn(params);
        params[i] = saved - epsilon;
        const Real lo = loss_fn(params);
        params[i] = saved;
        if (!std::isfinite(hi) || !std::isfinite(lo)) {
            throw std::runtime_error("finite_difference_gradient: non-finite loss at coordinate " +
                                     std::to_string(i));
        }
        grad[i] = (hi - lo) / (2 * epsilon);
    }
    return grad;
}

GradCheckReport compare_gradients(const std::vector<Real>& analytic,
                                  const std::vector<Real>& numeric,
                                  Real magnitude_floor) {
    if (analytic.size() != numeric.size()) {
        throw std::invalid_argument("compare_gradients: length mismatch");
    }
    GradCheckReport rep;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const Real a = analytic[i];
        const Real n = numeric[i];
        const Real mag = std::max(std::fabs(a), std::fabs(n));
        if (mag <= magnitude_floor) continue;
        ++rep.checked;
        const Real rel = std::fabs(a - n) / mag;
        if (rel > rep.max_rel_error) {
            rep.max_rel_error = rel;
            rep.worst_coord = i;
            rep.analytic_at_worst = a;
            rep.numeric_at_worst = n;
        }
    }
    return rep;
}

}  // namespace aoa
