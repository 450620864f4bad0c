#pragma once

#include <utility>
#include <vector>

#include "aoa/matrix.hpp"
#include "aoa/rng.hpp"

namespace aoa {

// Standard no-peephole LSTM:
//   i = sig(Wi x + Ui h + bi)    f = sig(Wf x + Uf h + bf)
//   o = sig(Wo x + Uo h + bo)    g = tanh(Wc x + Uc h + bc)
//   c = f*c_prev + i*g           h = o*tanh(c)
struct LstmWeights {
    Matrix Wi, Wf, Wo, Wc;  // d_h x d_in
    Matrix Ui, Uf, Uo, Uc;  // d_h x d_h
    std::vector<Real> bi, bf, bo, bc;  // d_h

    std::size_t d_in() const { return Wi.cols; }
    std::size_t d_h() const { return Wi.rows; }

    static LstmWeights zeros(std::size_t d_in, std::size_t d_h);
    void check_shapes() const;
};

struct BiLstm {
    LstmWeights fwd;
    LstmWeights bwd;

    std::size_t d_h() const { return fwd.d_h(); }
    static BiLstm zeros(std::size_t d_in, std::size_t d_h);
};

// One time step with its gate activations, retained for BPTT.
struct LstmStep {
    std::vector<Real> i, f, o, g, c, h;
};

std::pair<std::vector<Real>, std::vector<Real>> lstm_cell(
    const std::vector<Real>& x, const std::vector<Real>& h_prev,
    const std::vector<Real>& c_prev, const LstmWeights& w);

struct BiLstmCache {
    std::vector<LstmStep> fwd_steps;  // step t consumed input row t
    std::vector<LstmStep> bwd_steps;  // step k consumed input row n-1-k
};

// Zero initial states in both directions; output row t is
// [forward state at t || backward state at t].
Matrix bilstm_forward(const Matrix& x, const BiLstm& enc);
Matrix bilstm_forward_cached(const Matrix& x, const BiLstm& enc, BiLstmCache& cache);

struct LstmGrads {
    LstmWeights g;  // same shapes, accumulated gradients

    static LstmGrads zeros(std::size_t d_in, std::size_t d_h) {
        return {LstmWeights::zeros(d_in, d_h)};
    }
};

// Backpropagates d_out (n x 2d_h) through a cached bidirectional pass;
// accumulates weight gradients and returns the gradient w.r.t. x.
Matrix bilstm_backward(const Matrix& d_out, const Matrix& x, const BiLstm& enc,
                       const BiLstmCache& cache, LstmGrads& gfwd, LstmGrads& gbwd);

// Inverted dropout on LSTM inputs. Mask entries are 0 or 1/keep_rate, so
// the backward pass is an entrywise product with the same mask.
std::pair<Matrix, Matrix> input_dropout(const Matrix& x, Real keep_rate, Rng& rng,
                                        bool training);

}  // namespace aoa
