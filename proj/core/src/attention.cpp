#include "aoa/attention.hpp"

#include <stdexcept>
#include <tuple>

namespace aoa {

Matrix interaction(const Matrix& h_s, const Matrix& h_t) {
    if (h_s.cols != h_t.cols) {
        throw std::invalid_argument("interaction: hidden widths differ, " + h_s.shape_str() +
                                    " vs " + h_t.shape_str());
    }
    Matrix I(h_s.rows, h_t.rows);
    for (std::size_t i = 0; i < h_s.rows; ++i) {
        for (std::size_t j = 0; j < h_t.rows; ++j) {
            Real acc = 0;
            const Real* a = h_s.row(i);
            const Real* b = h_t.row(j);
            for (std::size_t k = 0; k < h_s.cols; ++k) acc += a[k] * b[k];
            I(i, j) = acc;
        }
    }
    return I;
}

std::pair<Matrix, Matrix> dual_attention(const Matrix& I) {
    return {softmax_cols(I), softmax_rows(I)};
}

std::vector<Real> average_beta(const Matrix& beta) {
    std::vector<Real> bar(beta.cols, Real(0));
    for (std::size_t i = 0; i < beta.rows; ++i) {
        const Real* r = beta.row(i);
        for (std::size_t j = 0; j < beta.cols; ++j) bar[j] += r[j];
    }
    for (Real& v : bar) v /= static_cast<Real>(beta.rows);
    return bar;
}

std::vector<Real> final_attention(const Matrix& alpha, const std::vector<Real>& beta_bar) {
    if (alpha.cols != beta_bar.size()) {
        throw std::invalid_argument("final_attention: alpha " + alpha.shape_str() +
                                    " vs beta_bar length " + std::to_string(beta_bar.size()));
    }
    return matvec(alpha, beta_bar);
}

std::vector<Real> sentence_representation(const Matrix& h_s, const std::vector<Real>& gamma) {
    if (h_s.rows != gamma.size()) {
        throw std::invalid_argument("sentence_representation: h_s " + h_s.shape_str() +
                                    " vs gamma length " + std::to_string(gamma.size()));
    }
    return matvec_t(h_s, gamma);
}

AoaResult aoa_forward(const Matrix& h_s, const Matrix& h_t) {
    AoaResult res;
    res.trace.I = interaction(h_s, h_t);
    std::tie(res.trace.alpha, res.trace.beta) = dual_attention(res.trace.I);
    res.trace.beta_bar = average_beta(res.trace.beta);
    res.trace.gamma = final_attention(res.trace.alpha, res.trace.beta_bar);
    res.r = sentence_representation(h_s, res.trace.gamma);
    return res;
}

void aoa_backward(const std::vector<Real>& d_r, const Matrix& h_s, const Matrix& h_t,
                  const AttentionTrace& trace, Matrix& d_h_s, Matrix& d_h_t) {
    const std::size_t n = h_s.rows;
    const std::size_t m = h_t.rows;
    if (d_r.size() != h_s.cols) {
        throw std::invalid_argument("aoa_backward: d_r length " + std::to_string(d_r.size()) +
                                    " vs hidden width " + std::to_string(h_s.cols));
    }
    d_h_s = Matrix(n, h_s.cols);
    d_h_t = Matrix(m, h_t.cols);

    // r = h_s^T gamma
    std::vector<Real> d_gamma(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real acc = 0;
        const Real* hr = h_s.row(i);
        for (std::size_t k = 0; k < h_s.cols; ++k) acc += hr[k] * d_r[k];
        d_gamma[i] = acc;
        Real* dr = d_h_s.row(i);
        for (std::size_t k = 0; k < h_s.cols; ++k) dr[k] += trace.gamma[i] * d_r[k];
    }

    // gamma = alpha beta_bar
    Matrix d_alpha(n, m);
    std::vector<Real> d_beta_bar(m, Real(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            d_alpha(i, j) = d_gamma[i] * trace.beta_bar[j];
            d_beta_bar[j] += trace.alpha(i, j) * d_gamma[i];
        }
    }

    // beta_bar = column mean of beta
    Matrix d_beta(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            d_beta(i, j) = d_beta_bar[j] / static_cast<Real>(n);
        }
    }

    // Softmax backward: dI = p * (dp - <p, dp>), per column for alpha and
    // per row for beta, summed.
    Matrix d_I(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        Real s = 0;
        for (std::size_t i = 0; i < n; ++i) s += trace.alpha(i, j) * d_alpha(i, j);
        for (std::size_t i = 0; i < n; ++i) {
            d_I(i, j) += trace.alpha(i, j) * (d_alpha(i, j) - s);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        Real s = 0;
        for (std::size_t j = 0; j < m; ++j) s += trace.beta(i, j) * d_beta(i, j);
        for (std::size_t j = 0; j < m; ++j) {
            d_I(i, j) += trace.beta(i, j) * (d_beta(i, j) - s);
        }
    }

    // I = h_s h_t^T
    add_inplace(d_h_s, matmul(d_I, h_t));
    add_inplace(d_h_t, matmul(transpose(d_I), h_s));
}

}  // namespace aoa
