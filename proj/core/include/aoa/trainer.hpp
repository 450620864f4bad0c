#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoa/model.hpp"

namespace aoa {

enum class LrScheduleMode {
    Patience,  // halve when epoch loss has not beaten its best for N epochs
    Window,    // halve when epoch loss is not below the loss N epochs ago
};

struct TrainConfig {
    std::size_t d_h = 150;
    Real lr = Real(0.01);
    std::size_t batch_size = 25;
    Real lambda = Real(1e-4);
    Real keep_rate = Real(0.2);
    Real init_range = Real(1e-4);
    Real oov_range = Real(0.01);
    Real val_fraction = Real(0.2);
    std::size_t max_epochs = 50;
    std::size_t patience_epochs = 3;
    Real lr_decay = Real(0.5);
    std::uint64_t seed = 42;
    LrScheduleMode lr_schedule = LrScheduleMode::Patience;

    void validate() const;
};

struct AdamState {
    std::vector<Real> m, v;  // flat, aligned with flatten(ModelParams)
    std::int64_t t = 0;
    Real beta1 = Real(0.9);
    Real beta2 = Real(0.999);
    Real eps = Real(1e-8);

    static AdamState zeros(std::size_t n) {
        AdamState s;
        s.m.assign(n, Real(0));
        s.v.assign(n, Real(0));
        return s;
    }
};

// Standard Adam with bias correction, on the flat parameter layout.
void adam_step(ModelParams& params, const ModelGrads& grads, AdamState& state, Real lr);

// Epoch-loss driven learning-rate control, isolated for unit testing.
class LrScheduler {
  public:
    LrScheduler(Real lr, Real decay, std::size_t patience, LrScheduleMode mode);
    // Feeds one epoch's training loss; returns the lr for the next epoch.
    Real observe(Real epoch_loss);
    Real lr() const { return lr_; }

  private:
    Real lr_;
    Real decay_;
    std::size_t patience_;
    LrScheduleMode mode_;
    Real best_;
    std::size_t stale_ = 0;
    std::vector<Real> history_;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    Real lr = 0;
    Real train_loss = 0;  // per-sample average over the epoch's batches
    Real train_accuracy = 0;
    Real val_accuracy = 0;
    double wall_seconds = 0;  // informational; excluded from default logs
};

struct TrainResult {
    ModelParams best;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
};

class TrainingAbort : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Uniform shuffle then split; validation takes floor(fraction * n) samples
// from the tail of the shuffled order.
std::pair<std::vector<Sample>, std::vector<Sample>> split_train_validation(
    const std::vector<Sample>& samples, Real fraction, Rng& rng);

// Mini-batch Adam training with the lr schedule above. Model selection is
// highest validation accuracy, earlier epoch on ties. Throws TrainingAbort
// (with epoch, batch and parameter norms) if the loss goes non-finite.
TrainResult train(const TrainConfig& config, const std::vector<Sample>& samples,
                  const Vocab& vocab, EmbeddingTable embeddings);

Real evaluate_accuracy(const ModelParams& params, const Vocab& vocab,
                       const std::vector<Sample>& samples);

// Accuracy of always predicting the most frequent training label
// (ties resolved toward positive).
Real majority_baseline(const std::vector<Sample>& train_samples,
                       const std::vector<Sample>& test_samples);

struct RunStats {
    std::vector<Real> accuracies;
    Real best = 0;
    Real mean = 0;
    Real stddev = 0;  // sample std (n-1); 0 when n == 1
};

RunStats run_stats(std::vector<Real> accuracies);

// k independent train+test runs with seeds derived from config.seed.
RunStats multi_run(const TrainConfig& config, std::size_t k,
                   const std::vector<Sample>& train_samples,
                   const std::vector<Sample>& test_samples, const Vocab& vocab,
                   const EmbeddingTable& embeddings);

}  // namespace aoa
