#include "aoa/model.hpp"

#include <stdexcept>

namespace aoa {

std::size_t param_count(std::size_t d_w, std::size_t d_h, std::size_t classes) {
    return 2 * 2 * 4 * (d_h * d_w + d_h * d_h + d_h) + classes * 2 * d_h + classes;
}

namespace {

template <typename Fn>
void for_each_lstm(const LstmWeights& w, Fn&& fn) {
    fn(w.Wi); fn(w.Wf); fn(w.Wo); fn(w.Wc);
    fn(w.Ui); fn(w.Uf); fn(w.Uo); fn(w.Uc);
}

template <typename Fn>
void for_each_lstm(LstmWeights& w, Fn&& fn) {
    fn(w.Wi); fn(w.Wf); fn(w.Wo); fn(w.Wc);
    fn(w.Ui); fn(w.Uf); fn(w.Uo); fn(w.Uc);
}

void append_lstm(const LstmWeights& w, std::vector<Real>& out) {
    for_each_lstm(w, [&](const Matrix& m) {
        out.insert(out.end(), m.data.begin(), m.data.end());
    });
    for (const auto* b : {&w.bi, &w.bf, &w.bo, &w.bc}) {
        out.insert(out.end(), b->begin(), b->end());
    }
}

void read_lstm(const std::vector<Real>& flat, std::size_t& pos, LstmWeights& w) {
    for_each_lstm(w, [&](Matrix& m) {
        std::copy(flat.begin() + pos, flat.begin() + pos + m.data.size(), m.data.begin());
        pos += m.data.size();
    });
    for (auto* b : {&w.bi, &w.bf, &w.bo, &w.bc}) {
        std::copy(flat.begin() + pos, flat.begin() + pos + b->size(), b->begin());
        pos += b->size();
    }
}

}  // namespace

std::vector<Real> flatten(const ModelParams& p) {
    std::vector<Real> out;
    out.reserve(param_count(p.d_w(), p.d_h(), p.linear.b.size()));
    append_lstm(p.sent_enc.fwd, out);
    append_lstm(p.sent_enc.bwd, out);
    append_lstm(p.target_enc.fwd, out);
    append_lstm(p.target_enc.bwd, out);
    out.insert(out.end(), p.linear.W.data.begin(), p.linear.W.data.end());
    out.insert(out.end(), p.linear.b.begin(), p.linear.b.end());
    return out;
}

void unflatten(const std::vector<Real>& flat, ModelParams& p) {
    const std::size_t expect = param_count(p.d_w(), p.d_h(), p.linear.b.size());
    if (flat.size() != expect) {
        throw std::invalid_argument("unflatten: expected " + std::to_string(expect) +
                                    " values, got " + std::to_string(flat.size()));
    }
    std::size_t pos = 0;
    read_lstm(flat, pos, p.sent_enc.fwd);
    read_lstm(flat, pos, p.sent_enc.bwd);
    read_lstm(flat, pos, p.target_enc.fwd);
    read_lstm(flat, pos, p.target_enc.bwd);
    std::copy(flat.begin() + pos, flat.begin() + pos + p.linear.W.data.size(),
              p.linear.W.data.begin());
    pos += p.linear.W.data.size();
    std::copy(flat.begin() + pos, flat.end(), p.linear.b.begin());
}

ModelGrads ModelGrads::zeros(std::size_t d_w, std::size_t d_h, std::size_t classes) {
    ModelGrads g{LstmGrads::zeros(d_w, d_h), LstmGrads::zeros(d_w, d_h),
                 LstmGrads::zeros(d_w, d_h), LstmGrads::zeros(d_w, d_h),
                 Matrix(classes, 2 * d_h),
                 std::vector<Real>(classes, Real(0))};
    return g;
}

std::vector<Real> flatten(const ModelGrads& g) {
    std::vector<Real> out;
    append_lstm(g.sent_fwd.g, out);
    append_lstm(g.sent_bwd.g, out);
    append_lstm(g.target_fwd.g, out);
    append_lstm(g.target_bwd.g, out);
    out.insert(out.end(), g.d_W_l.data.begin(), g.d_W_l.data.end());
    out.insert(out.end(), g.d_b_l.begin(), g.d_b_l.end());
    return out;
}

ModelParams init_params(std::size_t d_h, Real init_range, Rng& rng,
                        EmbeddingTable embeddings) {
    const std::size_t d_w = embeddings.dim;
    ModelParams p;
    p.embeddings = std::move(embeddings);
    auto init_lstm = [&](LstmWeights& w) {
        w = LstmWeights::zeros(d_w, d_h);
        for_each_lstm(w, [&](Matrix& m) {
            m = uniform_init(m.rows, m.cols, -init_range, init_range, rng);
        });
        // biases stay zero
    };
    init_lstm(p.sent_enc.fwd);
    init_lstm(p.sent_enc.bwd);
    init_lstm(p.target_enc.fwd);
    init_lstm(p.target_enc.bwd);
    p.linear.W = uniform_init(kNumClasses, 2 * d_h, -init_range, init_range, rng);
    p.linear.b.assign(kNumClasses, Real(0));
    return p;
}

namespace {

std::vector<std::string> aspect_tokens(const Sample& s) {
    return {s.tokens.begin() + static_cast<std::ptrdiff_t>(s.aspect_begin),
            s.tokens.begin() + static_cast<std::ptrdiff_t>(s.aspect_end)};
}

}  // namespace

ForwardResult model_forward(const ModelParams& params, const Vocab& vocab,
                            const Sample& sample, bool training, Real keep_rate,
                            Rng& dropout_rng, ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;

    const Matrix emb_s = lookup(params.embeddings, vocab, sample.tokens);
    const Matrix emb_t = lookup(params.embeddings, vocab, aspect_tokens(sample));
    std::tie(c.x_s, c.mask_s) = input_dropout(emb_s, keep_rate, dropout_rng, training);
    std::tie(c.x_t, c.mask_t) = input_dropout(emb_t, keep_rate, dropout_rng, training);

    c.h_s = bilstm_forward_cached(c.x_s, params.sent_enc, c.enc_s);
    c.h_t = bilstm_forward_cached(c.x_t, params.target_enc, c.enc_t);

    AoaResult aoa = aoa_forward(c.h_s, c.h_t);
    c.r = aoa.r;

    auto [probs, label] = predict(params.linear, c.r);
    c.probs = probs;
    return {std::move(probs), label, std::move(aoa.trace)};
}

Real l2_norm_sq(const ModelParams& p) {
    Real acc = 0;
    auto add_sq = [&](const Matrix& m) {
        for (const Real v : m.data) acc += v * v;
    };
    for (const BiLstm* enc : {&p.sent_enc, &p.target_enc}) {
        for_each_lstm(enc->fwd, add_sq);
        for_each_lstm(enc->bwd, add_sq);
    }
    add_sq(p.linear.W);
    return acc;
}

Real batch_loss(const ModelParams& params,
                const std::vector<std::pair<std::vector<Real>, Polarity>>& batch,
                Real lambda) {
    if (lambda < 0) throw std::invalid_argument("batch_loss: lambda must be >= 0");
    Real loss = 0;
    for (const auto& [r, y] : batch) {
        const auto [probs, label] = predict(params.linear, r);
        (void)label;
        loss += cross_entropy(probs, y);
    }
    return loss + lambda * l2_norm_sq(params);
}

Real batch_loss_samples(const ModelParams& params, const Vocab& vocab,
                        const std::vector<Sample>& batch, Real lambda,
                        const std::vector<ForwardCache>* caches) {
    Real loss = 0;
    Rng unused(0);
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const Sample& s = batch[k];
        ClassProbs probs;
        if (caches) {
            // Replay the recorded dropout masks against the current params.
            const ForwardCache& fc = (*caches)[k];
            Matrix x_s = lookup(params.embeddings, vocab, s.tokens);
            Matrix x_t = lookup(params.embeddings, vocab, aspect_tokens(s));
            for (std::size_t i = 0; i < x_s.data.size(); ++i) x_s.data[i] *= fc.mask_s.data[i];
            for (std::size_t i = 0; i < x_t.data.size(); ++i) x_t.data[i] *= fc.mask_t.data[i];
            const Matrix h_s = bilstm_forward(x_s, params.sent_enc);
            const Matrix h_t = bilstm_forward(x_t, params.target_enc);
            const AoaResult aoa = aoa_forward(h_s, h_t);
            probs = predict(params.linear, aoa.r).first;
        } else {
            probs = model_forward(params, vocab, s, false, Real(1), unused).probs;
        }
        loss += cross_entropy(probs, s.polarity);
    }
    return loss + lambda * l2_norm_sq(params);
}

ModelGrads model_backward(const ModelParams& params, const std::vector<Sample>& batch,
                          Real lambda, const std::vector<ForwardCache>& caches) {
    if (batch.size() != caches.size()) {
        throw std::invalid_argument("model_backward: batch size " + std::to_string(batch.size()) +
                                    " != cache count " + std::to_string(caches.size()));
    }
    ModelGrads g = ModelGrads::zeros(params.d_w(), params.d_h(), params.linear.b.size());

    // Accumulation runs in sample-index order for bitwise reproducibility.
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const Sample& s = batch[k];
        const ForwardCache& c = caches[k];

        // d loss / d scores = p - onehot(y)
        std::vector<Real> d_scores = c.probs.probs;
        d_scores[static_cast<std::size_t>(s.polarity)] -= Real(1);

        outer_accum(g.d_W_l, d_scores, c.r);
        for (std::size_t i = 0; i < d_scores.size(); ++i) g.d_b_l[i] += d_scores[i];
        const std::vector<Real> d_r = matvec_t(params.linear.W, d_scores);

        AttentionTrace trace;
        {
            // Rebuild the trace from the cached hidden states (cheap
            // relative to caching it per sample through training).
            const AoaResult aoa = aoa_forward(c.h_s, c.h_t);
            trace = aoa.trace;
        }
        Matrix d_h_s, d_h_t;
        aoa_backward(d_r, c.h_s, c.h_t, trace, d_h_s, d_h_t);

        Matrix d_x_s = bilstm_backward(d_h_s, c.x_s, params.sent_enc, c.enc_s,
                                       g.sent_fwd, g.sent_bwd);
        Matrix d_x_t = bilstm_backward(d_h_t, c.x_t, params.target_enc, c.enc_t,
                                       g.target_fwd, g.target_bwd);
        // Embeddings are frozen: d_x stops here.
        (void)d_x_s;
        (void)d_x_t;
    }

    // d(lambda ||theta||^2) = 2 lambda theta on each weight matrix.
    if (lambda != 0) {
        auto reg = [&](Matrix& grad, const Matrix& w) {
            for (std::size_t i = 0; i < w.data.size(); ++i) {
                grad.data[i] += 2 * lambda * w.data[i];
            }
        };
        auto reg_lstm = [&](LstmWeights& grad, const LstmWeights& w) {
            reg(grad.Wi, w.Wi); reg(grad.Wf, w.Wf); reg(grad.Wo, w.Wo); reg(grad.Wc, w.Wc);
            reg(grad.Ui, w.Ui); reg(grad.Uf, w.Uf); reg(grad.Uo, w.Uo); reg(grad.Uc, w.Uc);
        };
        reg_lstm(g.sent_fwd.g, params.sent_enc.fwd);
        reg_lstm(g.sent_bwd.g, params.sent_enc.bwd);
        reg_lstm(g.target_fwd.g, params.target_enc.fwd);
        reg_lstm(g.target_bwd.g, params.target_enc.bwd);
        reg(g.d_W_l, params.linear.W);
    }
    return g;
}

}  // namespace aoa
