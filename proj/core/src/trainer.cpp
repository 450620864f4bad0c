#include "aoa/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace aoa {

namespace {

// Derived-stream ids off the root seed.
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamEpochBase = 1000;  // +epoch: shuffle and dropout

}  // namespace

void TrainConfig::validate() const {
    if (d_h == 0 || batch_size == 0 || max_epochs == 0 || patience_epochs == 0) {
        throw std::invalid_argument("TrainConfig: sizes must be positive");
    }
    if (!(lr > 0) || !(init_range > 0) || !(oov_range > 0) || lambda < 0 ||
        !(lr_decay > 0)) {
        throw std::invalid_argument("TrainConfig: rates must be positive");
    }
    if (!(val_fraction > 0) || !(val_fraction < 1)) {
        throw std::invalid_argument("TrainConfig: val_fraction must be in (0,1)");
    }
    if (!(keep_rate > 0) || keep_rate > 1) {
        throw std::invalid_argument("TrainConfig: keep_rate must be in (0,1]");
    }
}

void adam_step(ModelParams& params, const ModelGrads& grads, AdamState& state, Real lr) {
    std::vector<Real> theta = flatten(params);
    const std::vector<Real> g = flatten(grads);
    if (theta.size() != g.size() || theta.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: parameter/gradient/state size mismatch");
    }
    state.t += 1;
    const Real bc1 = Real(1) - std::pow(state.beta1, static_cast<Real>(state.t));
    const Real bc2 = Real(1) - std::pow(state.beta2, static_cast<Real>(state.t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (Real(1) - state.beta1) * g[i];
        state.v[i] = state.beta2 * state.v[i] + (Real(1) - state.beta2) * g[i] * g[i];
        const Real m_hat = state.m[i] / bc1;
        const Real v_hat = state.v[i] / bc2;
        theta[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
    unflatten(theta, params);
}

LrScheduler::LrScheduler(Real lr, Real decay, std::size_t patience, LrScheduleMode mode)
    : lr_(lr), decay_(decay), patience_(patience), mode_(mode),
      best_(std::numeric_limits<Real>::infinity()) {}

Real LrScheduler::observe(Real epoch_loss) {
    history_.push_back(epoch_loss);
    if (mode_ == LrScheduleMode::Patience) {
        if (epoch_loss < best_) {
            best_ = epoch_loss;
            stale_ = 0;
        } else if (++stale_ >= patience_) {
            lr_ *= decay_;
            stale_ = 0;
        }
    } else {
        const std::size_t n = history_.size();
        if (n > patience_ && !(epoch_loss < history_[n - 1 - patience_])) {
            lr_ *= decay_;
        }
    }
    return lr_;
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_train_validation(
    const std::vector<Sample>& samples, Real fraction, Rng& rng) {
    if (!(fraction > 0) || !(fraction < 1)) {
        throw std::invalid_argument("split_train_validation: fraction must be in (0,1)");
    }
    if (samples.size() < 2) {
        throw std::invalid_argument("split_train_validation: need at least 2 samples");
    }
    std::vector<Sample> shuffled = samples;
    rng.shuffle(shuffled);
    const std::size_t val_n = static_cast<std::size_t>(
        std::floor(fraction * static_cast<Real>(samples.size())));
    const std::size_t train_n = shuffled.size() - val_n;
    std::vector<Sample> val(shuffled.begin() + static_cast<std::ptrdiff_t>(train_n),
                            shuffled.end());
    shuffled.resize(train_n);
    return {std::move(shuffled), std::move(val)};
}

Real evaluate_accuracy(const ModelParams& params, const Vocab& vocab,
                       const std::vector<Sample>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("evaluate_accuracy: empty sample set");
    }
    Rng unused(0);
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        const ForwardResult fr = model_forward(params, vocab, s, false, Real(1), unused);
        if (fr.label == s.polarity) ++correct;
    }
    return static_cast<Real>(correct) / static_cast<Real>(samples.size());
}

TrainResult train(const TrainConfig& config, const std::vector<Sample>& samples,
                  const Vocab& vocab, EmbeddingTable embeddings) {
    config.validate();
    if (samples.empty()) throw std::invalid_argument("train: empty training data");

    const Rng root(config.seed);
    Rng init_rng = root.derive(kStreamInit);
    Rng split_rng = root.derive(kStreamSplit);

    auto [train_set, val_set] = split_train_validation(samples, config.val_fraction, split_rng);

    ModelParams params = init_params(config.d_h, config.init_range, init_rng,
                                     std::move(embeddings));
    AdamState adam = AdamState::zeros(param_count(params.d_w(), config.d_h));
    LrScheduler sched(config.lr, config.lr_decay, config.patience_epochs, config.lr_schedule);

    TrainResult result;
    Real best_val = Real(-1);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng epoch_rng = root.derive(kStreamEpochBase + epoch);
        epoch_rng.shuffle(order);
        const Real lr = sched.lr();

        Real epoch_loss = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            std::vector<Sample> batch;
            batch.reserve(end - start);
            for (std::size_t k = start; k < end; ++k) batch.push_back(train_set[order[k]]);

            std::vector<ForwardCache> caches(batch.size());
            Real batch_ce = 0;
            for (std::size_t k = 0; k < batch.size(); ++k) {
                const ForwardResult fr = model_forward(params, vocab, batch[k], true,
                                                       config.keep_rate, epoch_rng, &caches[k]);
                batch_ce += cross_entropy(fr.probs, batch[k].polarity);
            }
            const Real loss = batch_ce + config.lambda * l2_norm_sq(params);
            if (!std::isfinite(loss)) {
                std::vector<Real> theta = flatten(params);
                Real norm = 0;
                for (const Real v : theta) norm += v * v;
                throw TrainingAbort("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch " + std::to_string(start / config.batch_size) +
                                    ", parameter norm " + std::to_string(std::sqrt(norm)));
            }
            epoch_loss += loss;

            const ModelGrads grads = model_backward(params, batch, config.lambda, caches);
            adam_step(params, grads, adam, lr);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.train_loss = epoch_loss / static_cast<Real>(train_set.size());
        rec.train_accuracy = evaluate_accuracy(params, vocab, samples);
        rec.val_accuracy = evaluate_accuracy(params, vocab, val_set);
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.history.push_back(rec);

        if (rec.val_accuracy > best_val) {
            best_val = rec.val_accuracy;
            result.best = params;
            result.best_epoch = epoch;
        }
        sched.observe(rec.train_loss);
    }
    return result;
}

Real majority_baseline(const std::vector<Sample>& train_samples,
                       const std::vector<Sample>& test_samples) {
    if (train_samples.empty() || test_samples.empty()) {
        throw std::invalid_argument("majority_baseline: empty input");
    }
    const DatasetStats train_stats = dataset_stats(train_samples);
    std::size_t best = 0;  // ties resolve to positive by iteration order
    for (std::size_t c = 1; c < 3; ++c) {
        if (train_stats.counts[c] > train_stats.counts[best]) best = c;
    }
    const DatasetStats test_stats = dataset_stats(test_samples);
    return static_cast<Real>(test_stats.counts[best]) /
           static_cast<Real>(test_stats.total());
}

RunStats run_stats(std::vector<Real> accuracies) {
    if (accuracies.empty()) throw std::invalid_argument("run_stats: no runs");
    RunStats st;
    st.accuracies = std::move(accuracies);
    st.best = *std::max_element(st.accuracies.begin(), st.accuracies.end());
    st.mean = std::accumulate(st.accuracies.begin(), st.accuracies.end(), Real(0)) /
              static_cast<Real>(st.accuracies.size());
    if (st.accuracies.size() > 1) {
        Real ss = 0;
        for (const Real a : st.accuracies) ss += (a - st.mean) * (a - st.mean);
        st.stddev = std::sqrt(ss / static_cast<Real>(st.accuracies.size() - 1));
    }
    return st;
}

RunStats multi_run(const TrainConfig& config, std::size_t k,
                   const std::vector<Sample>& train_samples,
                   const std::vector<Sample>& test_samples, const Vocab& vocab,
                   const EmbeddingTable& embeddings) {
    if (k == 0) throw std::invalid_argument("multi_run: k must be >= 1");
    std::vector<Real> accs;
    accs.reserve(k);
    for (std::size_t run = 0; run < k; ++run) {
        TrainConfig rc = config;
        rc.seed = Rng(config.seed).derive(0x5EED0000 + run).next_u64();
        const TrainResult tr = train(rc, train_samples, vocab, embeddings);
        accs.push_back(evaluate_accuracy(tr.best, vocab, test_samples));
    }
    return run_stats(std::move(accs));
}

}  // namespace aoa
