#include <benchmark/benchmark.h>

#include "aoa/attention.hpp"
#include "aoa/model.hpp"

using namespace aoa;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    return uniform_init(rows, cols, -0.5, 0.5, rng);
}

LstmWeights random_lstm(std::size_t d_in, std::size_t d_h, Rng& rng) {
    LstmWeights w = LstmWeights::zeros(d_in, d_h);
    for (Matrix* m : {&w.Wi, &w.Wf, &w.Wo, &w.Wc}) *m = random_matrix(d_h, d_in, rng);
    for (Matrix* m : {&w.Ui, &w.Uf, &w.Uo, &w.Uc}) *m = random_matrix(d_h, d_h, rng);
    return w;
}

std::pair<ModelParams, Vocab> bench_model(std::size_t d_w, std::size_t d_h,
                                          std::size_t vocab_size) {
    Sample s;
    for (std::size_t i = 0; i < vocab_size; ++i) s.tokens.push_back("w" + std::to_string(i));
    s.aspect_end = 1;
    Vocab vocab = build_vocab({s});
    Rng rng(1);
    EmbeddingTable emb = random_table(vocab, d_w, rng, 0.5);
    return {init_params(d_h, 0.08, rng, std::move(emb)), std::move(vocab)};
}

Sample bench_sample(std::size_t n, std::size_t m) {
    Sample s;
    for (std::size_t i = 0; i < n; ++i) s.tokens.push_back("w" + std::to_string(i % 40));
    s.aspect_begin = n / 2;
    s.aspect_end = n / 2 + m;
    s.polarity = Polarity::Positive;
    return s;
}

}  // namespace

void BM_Matmul(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    const Matrix a = random_matrix(dim, dim, rng);
    const Matrix b = random_matrix(dim, dim, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(matmul(a, b));
    }
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(128)->Arg(300);

void BM_BiLstmForward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    BiLstm enc{random_lstm(300, 150, rng), random_lstm(300, 150, rng)};
    const Matrix x = random_matrix(n, 300, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bilstm_forward(x, enc));
    }
}
BENCHMARK(BM_BiLstmForward)->Arg(8)->Arg(32)->Arg(80);

void BM_AoaForward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(4);
    const Matrix h_s = random_matrix(n, 300, rng);
    const Matrix h_t = random_matrix(3, 300, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aoa_forward(h_s, h_t));
    }
}
BENCHMARK(BM_AoaForward)->Arg(8)->Arg(32)->Arg(80);

void BM_ModelForward(benchmark::State& state) {
    auto [params, vocab] = bench_model(64, 32, 50);
    const Sample s = bench_sample(static_cast<std::size_t>(state.range(0)), 2);
    Rng rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model_forward(params, vocab, s, false, 1.0, rng));
    }
}
BENCHMARK(BM_ModelForward)->Arg(8)->Arg(32);

void BM_ModelForwardBackward(benchmark::State& state) {
    auto [params, vocab] = bench_model(64, 32, 50);
    const std::vector<Sample> batch{bench_sample(static_cast<std::size_t>(state.range(0)), 2)};
    Rng rng(6);
    for (auto _ : state) {
        std::vector<ForwardCache> caches(1);
        model_forward(params, vocab, batch[0], true, 1.0, rng, &caches[0]);
        benchmark::DoNotOptimize(model_backward(params, batch, 1e-4, caches));
    }
}
BENCHMARK(BM_ModelForwardBackward)->Arg(8)->Arg(32);
