#pragma once

#include <vector>

#include "aoa/data.hpp"
#include "aoa/matrix.hpp"

namespace aoa {

inline constexpr std::size_t kNumClasses = 3;  // positive, neutral, negative

struct LinearLayer {
    Matrix W;             // C x 2d_h
    std::vector<Real> b;  // C
};

struct ClassProbs {
    std::vector<Real> probs;  // C, sums to 1
};

// x = W r + b
std::vector<Real> scores(const LinearLayer& layer, const std::vector<Real>& r);

// Stable softmax over class scores; argmax label with lowest-index
// tie-break. Class order matches Polarity: 0=positive, 1=neutral,
// 2=negative.
std::pair<ClassProbs, Polarity> predict(const LinearLayer& layer,
                                        const std::vector<Real>& r);

std::vector<Real> softmax_vec(const std::vector<Real>& x);

// -log P(y), with the probability floored at 1e-12.
Real cross_entropy(const ClassProbs& p, Polarity y);

}  // namespace aoa
