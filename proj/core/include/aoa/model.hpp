#pragma once

#include <functional>
#include <vector>

#include "aoa/attention.hpp"
#include "aoa/classifier.hpp"
#include "aoa/embeddings.hpp"
#include "aoa/encoder.hpp"

namespace aoa {

// All trainable weights plus the frozen embedding table. Two independent
// Bi-LSTMs (sentence and target), no weight sharing.
struct ModelParams {
    BiLstm sent_enc;
    BiLstm target_enc;
    LinearLayer linear;
    EmbeddingTable embeddings;  // frozen; excluded from flatten()

    std::size_t d_h() const { return sent_enc.d_h(); }
    std::size_t d_w() const { return embeddings.dim; }
};

// Trainable parameter count:
//   2 encoders * 2 directions * 4 gates * (d_h*d_w + d_h*d_h + d_h)
//   + C*2d_h + C
std::size_t param_count(std::size_t d_w, std::size_t d_h, std::size_t classes = kNumClasses);

// Flat vector in the documented fixed order: sent fwd, sent bwd, target
// fwd, target bwd (each Wi Wf Wo Wc Ui Uf Uo Uc bi bf bo bc, row-major),
// then W_l, b_l. Round-trips bitwise.
std::vector<Real> flatten(const ModelParams& p);
void unflatten(const std::vector<Real>& flat, ModelParams& p);

// Gradients in the same layout as the trainable parameters.
struct ModelGrads {
    LstmGrads sent_fwd, sent_bwd, target_fwd, target_bwd;
    Matrix d_W_l;
    std::vector<Real> d_b_l;

    static ModelGrads zeros(std::size_t d_w, std::size_t d_h,
                            std::size_t classes = kNumClasses);
};
std::vector<Real> flatten(const ModelGrads& g);

// Weights U(-init_range, init_range), biases zero.
ModelParams init_params(std::size_t d_h, Real init_range, Rng& rng,
                        EmbeddingTable embeddings);

// Every intermediate needed to replay the backward pass exactly,
// dropout masks included.
struct ForwardCache {
    Matrix x_s, x_t;        // post-dropout encoder inputs
    Matrix mask_s, mask_t;  // dropout masks (entries 0 or 1/keep)
    BiLstmCache enc_s, enc_t;
    Matrix h_s, h_t;
    std::vector<Real> r;
    ClassProbs probs;
};

struct ForwardResult {
    ClassProbs probs;
    Polarity label;
    AttentionTrace trace;
};

// Embedding lookup -> input dropout -> two Bi-LSTMs -> AOA -> linear ->
// softmax. Dropout applies only when training is true.
ForwardResult model_forward(const ModelParams& params, const Vocab& vocab,
                            const Sample& sample, bool training, Real keep_rate,
                            Rng& dropout_rng, ForwardCache* cache = nullptr);

// Sum of squares of the regularized set: LSTM W/U matrices and W_l.
// Biases and embeddings are excluded.
Real l2_norm_sq(const ModelParams& p);

// Summed cross-entropy over precomputed sentence representations plus
// lambda * l2_norm_sq. The batch objective of training.
Real batch_loss(const ModelParams& params,
                const std::vector<std::pair<std::vector<Real>, Polarity>>& batch,
                Real lambda);

// Full-batch objective from samples: forwards (training mode with the
// given masks replayed from caches is not needed here; this recomputes).
Real batch_loss_samples(const ModelParams& params, const Vocab& vocab,
                        const std::vector<Sample>& batch, Real lambda,
                        const std::vector<ForwardCache>* caches = nullptr);

// Exact analytic gradient of batch_loss_samples at the cached forward
// passes. caches must come from model_forward with matching samples.
ModelGrads model_backward(const ModelParams& params, const std::vector<Sample>& batch,
                          Real lambda, const std::vector<ForwardCache>& caches);

}  // namespace aoa
