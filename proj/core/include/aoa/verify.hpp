#pragma once

#include <cstdint>

#include "aoa/gradcheck.hpp"

namespace aoa {

struct ModelGradCheckConfig {
    std::uint64_t seed = 1;
    std::size_t d_w = 4;
    std::size_t d_h = 3;
    std::size_t n = 6;  // sentence length
    std::size_t m = 2;  // aspect length
    Real lambda = Real(1e-3);
    // Central differences: truncation falls with epsilon^2 but roundoff grows
    // as 1/epsilon; 1e-4 balances the two for O(1) losses.
    Real epsilon = Real(1e-4);
    bool corrupt = false;  // negative-control hook: perturbs one gradient
};

// Builds a small random model and batch (dropout off), then compares the
// full analytic gradient against central differences.
GradCheckReport model_gradient_check(const ModelGradCheckConfig& cfg);

}  // namespace aoa
