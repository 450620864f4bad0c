#include "aoa/encoder.hpp"

#include <cmath>
#include <stdexcept>

namespace aoa {

LstmWeights LstmWeights::zeros(std::size_t d_in, std::size_t d_h) {
    LstmWeights w;
    w.Wi = w.Wf = w.Wo = w.Wc = Matrix(d_h, d_in);
    w.Ui = w.Uf = w.Uo = w.Uc = Matrix(d_h, d_h);
    w.bi = w.bf = w.bo = w.bc = std::vector<Real>(d_h, Real(0));
    return w;
}

void LstmWeights::check_shapes() const {
    const std::size_t din = d_in(), dh = d_h();
    auto bad = [&](const Matrix& m, std::size_t r, std::size_t c) {
        return m.rows != r || m.cols != c;
    };
    if (bad(Wf, dh, din) || bad(Wo, dh, din) || bad(Wc, dh, din) || bad(Ui, dh, dh) ||
        bad(Uf, dh, dh) || bad(Uo, dh, dh) || bad(Uc, dh, dh) || bi.size() != dh ||
        bf.size() != dh || bo.size() != dh || bc.size() != dh) {
        throw std::invalid_argument("LstmWeights: inconsistent shapes for d_in=" +
                                    std::to_string(din) + " d_h=" + std::to_string(dh));
    }
}

BiLstm BiLstm::zeros(std::size_t d_in, std::size_t d_h) {
    return {LstmWeights::zeros(d_in, d_h), LstmWeights::zeros(d_in, d_h)};
}

namespace {

// Gate preactivation a = W x + U h_prev + b, then the nonlinearity.
std::vector<Real> gate(const Matrix& w, const Matrix& u, const std::vector<Real>& b,
                       const std::vector<Real>& x, const std::vector<Real>& h_prev,
                       bool use_tanh) {
    std::vector<Real> a = matvec(w, x);
    const std::vector<Real> rec = matvec(u, h_prev);
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] += rec[k] + b[k];
        a[k] = use_tanh ? std::tanh(a[k]) : sigmoid(a[k]);
    }
    return a;
}

LstmStep cell_step(const std::vector<Real>& x, const std::vector<Real>& h_prev,
                   const std::vector<Real>& c_prev, const LstmWeights& w) {
    LstmStep s;
    s.i = gate(w.Wi, w.Ui, w.bi, x, h_prev, false);
    s.f = gate(w.Wf, w.Uf, w.bf, x, h_prev, false);
    s.o = gate(w.Wo, w.Uo, w.bo, x, h_prev, false);
    s.g = gate(w.Wc, w.Uc, w.bc, x, h_prev, true);
    const std::size_t dh = w.d_h();
    s.c.resize(dh);
    s.h.resize(dh);
    for (std::size_t k = 0; k < dh; ++k) {
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        s.h[k] = s.o[k] * std::tanh(s.c[k]);
    }
    return s;
}

// One direction over the whole sequence. reverse=false walks input rows
// 0..n-1; reverse=true walks n-1..0.
void run_direction(const Matrix& x, const LstmWeights& w, bool reverse,
                   std::vector<LstmStep>& steps) {
    const std::size_t n = x.rows;
    const std::size_t dh = w.d_h();
    std::vector<Real> h(dh, Real(0)), c(dh, Real(0));
    steps.clear();
    steps.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t t = reverse ? n - 1 - k : k;
        std::vector<Real> xt(x.row(t), x.row(t) + x.cols);
        LstmStep s = cell_step(xt, h, c, w);
        h = s.h;
        c = s.c;
        steps.push_back(std::move(s));
    }
}

}  // namespace

std::pair<std::vector<Real>, std::vector<Real>> lstm_cell(
    const std::vector<Real>& x, const std::vector<Real>& h_prev,
    const std::vector<Real>& c_prev, const LstmWeights& w) {
    w.check_shapes();
    if (x.size() != w.d_in() || h_prev.size() != w.d_h() || c_prev.size() != w.d_h()) {
        throw std::invalid_argument("lstm_cell: input lengths do not match d_in=" +
                                    std::to_string(w.d_in()) + " d_h=" +
                                    std::to_string(w.d_h()));
    }
    LstmStep s = cell_step(x, h_prev, c_prev, w);
    return {std::move(s.h), std::move(s.c)};
}

Matrix bilstm_forward_cached(const Matrix& x, const BiLstm& enc, BiLstmCache& cache) {
    if (x.rows == 0) throw std::invalid_argument("bilstm_forward: empty sequence");
    if (x.cols != enc.fwd.d_in()) {
        throw std::invalid_argument("bilstm_forward: input width " + std::to_string(x.cols) +
                                    " != encoder d_in " + std::to_string(enc.fwd.d_in()));
    }
    const std::size_t n = x.rows;
    const std::size_t dh = enc.d_h();
    run_direction(x, enc.fwd, false, cache.fwd_steps);
    run_direction(x, enc.bwd, true, cache.bwd_steps);
    Matrix out(n, 2 * dh);
    for (std::size_t t = 0; t < n; ++t) {
        const std::vector<Real>& hf = cache.fwd_steps[t].h;
        const std::vector<Real>& hb = cache.bwd_steps[n - 1 - t].h;
        for (std::size_t k = 0; k < dh; ++k) {
            out(t, k) = hf[k];
            out(t, dh + k) = hb[k];
        }
    }
    return out;
}

Matrix bilstm_forward(const Matrix& x, const BiLstm& enc) {
    BiLstmCache cache;
    return bilstm_forward_cached(x, enc, cache);
}

namespace {

// BPTT over one direction. d_h_steps[k] is the gradient arriving at the
// hidden state produced at step k (from the concatenated output).
// Accumulates into grads and d_x (at the original input rows).
void backward_direction(const Matrix& x, const LstmWeights& w,
                        const std::vector<LstmStep>& steps, bool reverse,
                        const std::vector<std::vector<Real>>& d_h_steps, LstmWeights& g,
                        Matrix& d_x) {
    const std::size_t n = steps.size();
    const std::size_t dh = w.d_h();
    std::vector<Real> dh_next(dh, Real(0)), dc_next(dh, Real(0));
    std::vector<Real> dai(dh), daf(dh), dao(dh), dag(dh);
    for (std::size_t k = n; k-- > 0;) {
        const LstmStep& s = steps[k];
        const std::vector<Real>* h_prev = k > 0 ? &steps[k - 1].h : nullptr;
        const std::vector<Real>* c_prev = k > 0 ? &steps[k - 1].c : nullptr;
        const std::size_t t = reverse ? n - 1 - k : k;
        std::vector<Real> xt(x.row(t), x.row(t) + x.cols);

        for (std::size_t j = 0; j < dh; ++j) {
            const Real dh_j = d_h_steps[k][j] + dh_next[j];
            const Real tc = std::tanh(s.c[j]);
            const Real do_j = dh_j * tc;
            const Real dc_j = dc_next[j] + dh_j * s.o[j] * (1 - tc * tc);
            const Real di_j = dc_j * s.g[j];
            const Real df_j = dc_j * (c_prev ? (*c_prev)[j] : Real(0));
            const Real dg_j = dc_j * s.i[j];
            dc_next[j] = dc_j * s.f[j];
            dai[j] = di_j * s.i[j] * (1 - s.i[j]);
            daf[j] = df_j * s.f[j] * (1 - s.f[j]);
            dao[j] = do_j * s.o[j] * (1 - s.o[j]);
            dag[j] = dg_j * (1 - s.g[j] * s.g[j]);
        }

        outer_accum(g.Wi, dai, xt);
        outer_accum(g.Wf, daf, xt);
        outer_accum(g.Wo, dao, xt);
        outer_accum(g.Wc, dag, xt);
        for (std::size_t j = 0; j < dh; ++j) {
            g.bi[j] += dai[j];
            g.bf[j] += daf[j];
            g.bo[j] += dao[j];
            g.bc[j] += dag[j];
        }
        if (h_prev) {
            outer_accum(g.Ui, dai, *h_prev);
            outer_accum(g.Uf, daf, *h_prev);
            outer_accum(g.Uo, dao, *h_prev);
            outer_accum(g.Uc, dag, *h_prev);
        }

        std::vector<Real> dhp = matvec_t(w.Ui, dai);
        const std::vector<Real> dhpf = matvec_t(w.Uf, daf);
        const std::vector<Real> dhpo = matvec_t(w.Uo, dao);
        const std::vector<Real> dhpc = matvec_t(w.Uc, dag);
        for (std::size_t j = 0; j < dh; ++j) dhp[j] += dhpf[j] + dhpo[j] + dhpc[j];
        dh_next = std::move(dhp);

        const std::vector<Real> dxi = matvec_t(w.Wi, dai);
        const std::vector<Real> dxf = matvec_t(w.Wf, daf);
        const std::vector<Real> dxo = matvec_t(w.Wo, dao);
        const std::vector<Real> dxc = matvec_t(w.Wc, dag);
        Real* dxr = d_x.row(t);
        for (std::size_t j = 0; j < x.cols; ++j) {
            dxr[j] += dxi[j] + dxf[j] + dxo[j] + dxc[j];
        }
    }
}

}  // namespace

Matrix bilstm_backward(const Matrix& d_out, const Matrix& x, const BiLstm& enc,
                       const BiLstmCache& cache, LstmGrads& gfwd, LstmGrads& gbwd) {
    const std::size_t n = x.rows;
    const std::size_t dh = enc.d_h();
    if (d_out.rows != n || d_out.cols != 2 * dh) {
        throw std::invalid_argument("bilstm_backward: gradient shape " + d_out.shape_str() +
                                    " does not match output " + std::to_string(n) + "x" +
                                    std::to_string(2 * dh));
    }
    if (cache.fwd_steps.size() != n || cache.bwd_steps.size() != n) {
        throw std::invalid_argument("bilstm_backward: cache does not match input length");
    }
    Matrix d_x(n, x.cols);
    std::vector<std::vector<Real>> d_h_fwd(n, std::vector<Real>(dh));
    std::vector<std::vector<Real>> d_h_bwd(n, std::vector<Real>(dh));
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t k = 0; k < dh; ++k) {
            d_h_fwd[t][k] = d_out(t, k);
            d_h_bwd[n - 1 - t][k] = d_out(t, dh + k);
        }
    }
    backward_direction(x, enc.fwd, cache.fwd_steps, false, d_h_fwd, gfwd.g, d_x);
    backward_direction(x, enc.bwd, cache.bwd_steps, true, d_h_bwd, gbwd.g, d_x);
    return d_x;
}

std::pair<Matrix, Matrix> input_dropout(const Matrix& x, Real keep_rate, Rng& rng,
                                        bool training) {
    if (!(keep_rate > 0) || keep_rate > 1) {
        throw std::invalid_argument("input_dropout: keep_rate must be in (0, 1]");
    }
    Matrix mask(x.rows, x.cols, Real(1));
    if (!training || keep_rate == Real(1)) {
        return {x, mask};
    }
    Matrix out(x.rows, x.cols);
    const Real scale = Real(1) / keep_rate;
    for (std::size_t idx = 0; idx < x.data.size(); ++idx) {
        const bool keep = rng.uniform() < keep_rate;
        mask.data[idx] = keep ? scale : Real(0);
        out.data[idx] = x.data[idx] * mask.data[idx];
    }
    return {out, mask};
}

}  // namespace aoa
