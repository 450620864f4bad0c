#pragma once

#include <vector>

#include "aoa/matrix.hpp"

namespace aoa {

// Every intermediate of the attention-over-attention block, kept for
// visualization and invariant tests.
struct AttentionTrace {
    Matrix I;      // n x m interaction
    Matrix alpha;  // column-stochastic, target-to-sentence
    Matrix beta;   // row-stochastic, sentence-to-target
    std::vector<Real> beta_bar;  // m, target-level attention
    std::vector<Real> gamma;     // n, final sentence attention
};

// I = h_s * h_t^T
Matrix interaction(const Matrix& h_s, const Matrix& h_t);

// (alpha, beta) = (softmax_cols(I), softmax_rows(I))
std::pair<Matrix, Matrix> dual_attention(const Matrix& I);

// Mean of beta over sentence positions.
std::vector<Real> average_beta(const Matrix& beta);

// gamma = alpha * beta_bar
std::vector<Real> final_attention(const Matrix& alpha, const std::vector<Real>& beta_bar);

// r = h_s^T * gamma
std::vector<Real> sentence_representation(const Matrix& h_s, const std::vector<Real>& gamma);

struct AoaResult {
    std::vector<Real> r;  // 2d_h
    AttentionTrace trace;
};

AoaResult aoa_forward(const Matrix& h_s, const Matrix& h_t);

// Gradients of a scalar loss w.r.t. h_s and h_t given its gradient
// w.r.t. r and the forward trace.
void aoa_backward(const std::vector<Real>& d_r, const Matrix& h_s, const Matrix& h_t,
                  const AttentionTrace& trace, Matrix& d_h_s, Matrix& d_h_t);

}  // namespace aoa
