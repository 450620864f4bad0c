#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aoa/classifier.hpp"
#include "aoa/model.hpp"

using namespace aoa;

namespace {

LinearLayer zero_layer(std::size_t width) {
    return {Matrix(kNumClasses, width), std::vector<Real>(kNumClasses, 0)};
}

}  // namespace

TEST_CASE("scores affine map") {
    const LinearLayer zero = zero_layer(4);
    const std::vector<Real> r{1, -2, 3, 0.5};
    for (const Real v : scores(zero, r)) CHECK(v == 0);

    Rng rng(81);
    LinearLayer layer{uniform_init(kNumClasses, 4, -1, 1, rng), {0.1, 0.2, 0.3}};
    std::vector<Real> e1(4, 0);
    e1[1] = 1;
    const std::vector<Real> x = scores(layer, e1);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        CHECK(x[c] == doctest::Approx(layer.W(c, 1) + layer.b[c]).epsilon(1e-12));
    }

    const std::vector<Real> xr = scores(layer, r);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        Real ref = layer.b[c];
        for (std::size_t k = 0; k < 4; ++k) ref += layer.W(c, k) * r[k];
        CHECK(xr[c] == doctest::Approx(ref).epsilon(1e-12));
    }

    CHECK_THROWS_AS(scores(layer, {1.0}), std::invalid_argument);
}

TEST_CASE("predict uniform, known softmax and shift invariance") {
    const LinearLayer zero = zero_layer(4);
    const auto [probs, label] = predict(zero, {1, 2, 3, 4});
    for (const Real p : probs.probs) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(label == Polarity::Positive);  // tie-break to lowest class index

    const std::vector<Real> p2 = softmax_vec({std::log(Real(2)), 0, 0});
    CHECK(p2[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p2[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p2[2] == doctest::Approx(0.25).epsilon(1e-12));

    const std::vector<Real> shifted = softmax_vec({std::log(Real(2)) + 100, 100, 100});
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(shifted[c] == doctest::Approx(p2[c]).epsilon(1e-12));
    }
}

TEST_CASE("cross entropy values") {
    ClassProbs uniform{{Real(1) / 3, Real(1) / 3, Real(1) / 3}};
    CHECK(cross_entropy(uniform, Polarity::Neutral) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(cross_entropy(uniform, Polarity::Neutral) == doctest::Approx(1.0986122886681098));

    ClassProbs onehot{{1.0, 0.0, 0.0}};
    CHECK(cross_entropy(onehot, Polarity::Positive) <= 1e-10);
    // The clamp keeps impossible labels finite.
    CHECK(cross_entropy(onehot, Polarity::Negative) ==
          doctest::Approx(-std::log(1e-12)).epsilon(1e-9));
}

TEST_CASE("batch_loss sums cross entropies plus the L2 term") {
    Rng rng(82);
    EmbeddingTable emb = random_table(build_vocab({[] {
                                          Sample s;
                                          s.tokens = {"a", "b"};
                                          s.aspect_end = 1;
                                          return s;
                                      }()}),
                                      2, rng, 0.5);
    ModelParams params = init_params(2, 1e-4, rng, std::move(emb));

    std::vector<std::pair<std::vector<Real>, Polarity>> batch;
    batch.emplace_back(std::vector<Real>(4, 0.0), Polarity::Neutral);
    // Near-zero weights: probabilities are essentially uniform.
    CHECK(batch_loss(params, batch, 0) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-6));

    // lambda=1, theta a single 2x2 matrix of ones, no CE term.
    ModelParams tiny = params;
    auto zero_lstm = [](LstmWeights& w) {
        w = LstmWeights::zeros(w.d_in(), w.d_h());
    };
    zero_lstm(tiny.sent_enc.fwd);
    zero_lstm(tiny.sent_enc.bwd);
    zero_lstm(tiny.target_enc.fwd);
    zero_lstm(tiny.target_enc.bwd);
    tiny.linear.W = Matrix(kNumClasses, 4);
    tiny.sent_enc.fwd.Wi = Matrix(2, 2, 1.0);
    CHECK(batch_loss(tiny, {}, 1.0) == doctest::Approx(4.0).epsilon(1e-12));

    // Additivity at lambda=0.
    batch.emplace_back(std::vector<Real>{1, 0, -1, 2}, Polarity::Negative);
    const Real joint = batch_loss(params, batch, 0);
    const Real split = batch_loss(params, {batch[0]}, 0) + batch_loss(params, {batch[1]}, 0);
    CHECK(joint == doctest::Approx(split).epsilon(1e-12));
    // And explicit lambda accounting: the regularizer enters once.
    const Real lam = 0.37;
    CHECK(batch_loss(params, batch, lam) ==
          doctest::Approx(joint + lam * l2_norm_sq(params)).epsilon(1e-12));

    CHECK_THROWS_AS(batch_loss(params, batch, -1.0), std::invalid_argument);
}

TEST_CASE("regularized set excludes biases and embeddings") {
    Rng rng(83);
    Sample s;
    s.tokens = {"a"};
    s.aspect_end = 1;
    EmbeddingTable emb = random_table(build_vocab({s}), 2, rng, 0.5);
    ModelParams p = init_params(2, 1e-4, rng, std::move(emb));
    const Real base = l2_norm_sq(p);
    p.linear.b[0] = 100;
    p.sent_enc.fwd.bi[0] = 50;
    p.embeddings.table(0, 0) = 77;
    CHECK(l2_norm_sq(p) == base);
    p.linear.W(0, 0) += 2;
    CHECK(l2_norm_sq(p) > base);
}
