#include "aoa/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoa {

std::vector<Real> scores(const LinearLayer& layer, const std::vector<Real>& r) {
    if (layer.W.cols != r.size() || layer.W.rows != layer.b.size()) {
        throw std::invalid_argument("scores: layer " + layer.W.shape_str() +
                                    " vs feature length " + std::to_string(r.size()));
    }
    std::vector<Real> x = matvec(layer.W, r);
    for (std::size_t c = 0; c < x.size(); ++c) x[c] += layer.b[c];
    return x;
}

std::vector<Real> softmax_vec(const std::vector<Real>& x) {
    const Real mx = *std::max_element(x.begin(), x.end());
    std::vector<Real> p(x.size());
    Real sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = std::exp(x[i] - mx);
        sum += p[i];
    }
    for (Real& v : p) v /= sum;
    return p;
}

std::pair<ClassProbs, Polarity> predict(const LinearLayer& layer,
                                        const std::vector<Real>& r) {
    ClassProbs cp{softmax_vec(scores(layer, r))};
    std::size_t best = 0;
    for (std::size_t c = 1; c < cp.probs.size(); ++c) {
        if (cp.probs[c] > cp.probs[best]) best = c;
    }
    return {std::move(cp), static_cast<Polarity>(best)};
}

Real cross_entropy(const ClassProbs& p, Polarity y) {
    const std::size_t c = static_cast<std::size_t>(y);
    if (c >= p.probs.size()) {
        throw std::invalid_argument("cross_entropy: label index out of range");
    }
    return -std::log(std::max(p.probs[c], Real(1e-12)));
}

}  // namespace aoa
