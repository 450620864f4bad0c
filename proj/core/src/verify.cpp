#include "aoa/verify.hpp"

#include "aoa/model.hpp"

namespace aoa {

GradCheckReport model_gradient_check(const ModelGradCheckConfig& cfg) {
    Rng rng(cfg.seed);

    // Synthetic vocabulary large enough for two sentences.
    std::vector<Sample> seed_samples(1);
    for (std::size_t i = 0; i < 2 * cfg.n; ++i) {
        seed_samples[0].tokens.push_back("w" + std::to_string(i));
    }
    seed_samples[0].aspect_end = 1;
    const Vocab vocab = build_vocab(seed_samples);

    Rng emb_rng = rng.derive(1);
    // Larger embedding scale than training defaults keeps gradient
    // magnitudes comfortably above the comparison floor.
    EmbeddingTable emb = random_table(vocab, cfg.d_w, emb_rng, Real(0.5));

    Rng init_rng = rng.derive(2);
    ModelParams params = init_params(cfg.d_h, Real(0.3), init_rng, std::move(emb));

    std::vector<Sample> batch;
    Rng pick = rng.derive(3);
    for (int s = 0; s < 2; ++s) {
        Sample smp;
        const std::size_t len = cfg.n - static_cast<std::size_t>(s % 2);
        for (std::size_t i = 0; i < len; ++i) {
            smp.tokens.push_back("w" + std::to_string(pick.next_below(2 * cfg.n)));
        }
        const std::size_t m = std::min(cfg.m, len);
        smp.aspect_begin = pick.next_below(len - m + 1);
        smp.aspect_end = smp.aspect_begin + m;
        smp.polarity = static_cast<Polarity>(pick.next_below(3));
        batch.push_back(std::move(smp));
    }

    // Forward with dropout off (keep_rate 1), caches retained.
    Rng drop_rng = rng.derive(4);
    std::vector<ForwardCache> caches(batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k) {
        model_forward(params, vocab, batch[k], true, Real(1), drop_rng, &caches[k]);
    }

    std::vector<Real> analytic = flatten(model_backward(params, batch, cfg.lambda, caches));
    if (cfg.corrupt && !analytic.empty()) {
        analytic[analytic.size() / 2] *= Real(1.5);
        analytic[analytic.size() / 2] += Real(0.01);
    }

    ModelParams probe = params;
    const auto loss_fn = [&](const std::vector<Real>& flat) {
        unflatten(flat, probe);
        return batch_loss_samples(probe, vocab, batch, cfg.lambda, &caches);
    };
    const std::vector<Real> numeric =
        finite_difference_gradient(loss_fn, flatten(params), cfg.epsilon);

    return compare_gradients(analytic, numeric);
}

}  // namespace aoa
