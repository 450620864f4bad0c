#pragma once

#include <functional>
#include <vector>

#include "aoa/matrix.hpp"

namespace aoa {

// Central-difference gradient of a scalar loss over a flat parameter
// vector. The independent oracle used to verify every analytic gradient
// in this project. Throws if the loss is non-finite at any probe point,
// naming the offending coordinate.
std::vector<Real> finite_difference_gradient(
    const std::function<Real(const std::vector<Real>&)>& loss_fn,
    std::vector<Real> params, Real epsilon);

struct GradCheckReport {
    Real max_rel_error{0};
    std::size_t worst_coord{0};
    Real analytic_at_worst{0};
    Real numeric_at_worst{0};
    std::size_t checked{0};
};

// Compares analytic vs numeric gradients on coordinates where either
// exceeds magnitude_floor; relative error |a-n| / max(|a|,|n|).
GradCheckReport compare_gradients(const std::vector<Real>& analytic,
                                  const std::vector<Real>& numeric,
                                  Real magnitude_floor = Real(1e-8));

}  // namespace aoa
