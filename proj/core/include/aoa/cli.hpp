#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "aoa/checkpoint.hpp"
#include "aoa/trainer.hpp"
#include "aoa/verify.hpp"

// Command implementations shared by the aoa tool and the test suites.
// Exit codes: 0 ok, 1 input/IO error, 2 training abort, 3 verification
// failure.
namespace aoa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitTrainingAbort = 2;
inline constexpr int kExitVerificationFailure = 3;

// Loads a dataset in either supported format ("semeval-xml" or "tsv").
LoadResult load_dataset(const std::string& path, const std::string& format);

struct TrainArgs {
    std::string train_path;
    std::string format = "tsv";
    std::string embeddings_path;  // empty: random table of embedding_dim
    std::size_t embedding_dim = 300;
    std::string out_path;
    std::string log_path;  // empty: history to stdout
    bool log_timing = false;
    TrainConfig config;
};
int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
    std::string model_path;
    std::string data_path;
    std::string format = "tsv";
    bool majority = false;
    std::string train_path;  // required with majority
};
int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct PredictArgs {
    std::string model_path;
    std::string sentence;
    std::string aspect;
    std::optional<std::size_t> from;
    std::optional<std::size_t> to;
};
int run_predict(const PredictArgs& args, std::ostream& out, std::ostream& err);

struct VisualizeArgs {
    std::string model_path;
    std::string data_path;
    std::string format = "tsv";
    std::string out_path;
    bool ansi = false;
};
int run_visualize(const VisualizeArgs& args, std::ostream& out, std::ostream& err);

struct GradcheckArgs {
    ModelGradCheckConfig config;
};
int run_gradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err);

struct StatsArgs {
    std::string data_path;
    std::string format = "tsv";
};
int run_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);

// One JSON-lines history record.
std::string history_line(const EpochRecord& rec, bool with_timing);

}  // namespace aoa::cli
